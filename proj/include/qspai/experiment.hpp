#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qspai/krylov.hpp"
#include "qspai/poisson.hpp"
#include "qspai/spai.hpp"

namespace qspai {

enum class BackendKind { Exact, Sa };

/// Full description of one benchmark run. The zero-argument defaults are
/// the reference configuration every experiment starts from.
struct ExperimentConfig {
    int gx = 401;
    int gy = 301;
    double h = 1.0;
    bool split = false;
    double k = 1.0;   // uniform material
    double k1 = 1.0;  // vertical split, left
    double k2 = 1.0;  // vertical split, right
    double source_f = 1.0;
    double eps_box = 1e-6;
    double box_length = 1.0;
    int max_box_iters = 100;
    double cg_tol = 1e-10;
    int max_cg_iters = 50000;
    BackendKind backend = BackendKind::Exact;
    std::uint64_t sa_seed = 0;
    int sa_samples = 100;
    int sa_sweeps = 1000;
    bool cache = true;
    std::string out_dir = "qspai_out";
    bool export_k = false;
    bool export_m = false;
};

struct ExperimentReport {
    ExperimentConfig config;
    int cg_iterations = 0;
    bool cg_converged = false;
    double cg_final_relative_residual = 0.0;
    int pcg_iterations = 0;
    bool pcg_converged = false;
    double pcg_final_relative_residual = 0.0;
    std::string pcg_status;  // "converged" | "max_iterations" | "breakdown"
    SpaiStats spai_stats;
    double speedup = 0.0;  // cg/pcg iteration ratio, valid when both converged
    std::vector<std::string> artifacts;  // file names relative to out_dir
    double wall_seconds = 0.0;           // console only, never serialized
};

std::string report_json(const ExperimentReport& report);

/// Assembles the configured problem, builds the SPAI, runs CG and Q-PCG,
/// and writes traces, the solution field, SPAI stats, and the report into
/// config.out_dir. Solver non-convergence is recorded, not thrown.
ExperimentReport run_single(const ExperimentConfig& config);

/// One run_single per box tolerance, each in an eps_<value> subdirectory.
std::vector<ExperimentReport> run_sweep_eps(const ExperimentConfig& config,
                                            const std::vector<double>& eps_values);

/// One run_single per initial box length, each in an L_<value> subdirectory.
std::vector<ExperimentReport> run_sweep_length(const ExperimentConfig& config,
                                               const std::vector<double>& box_lengths);

/// Vertical-split run with the given conductivities.
ExperimentReport run_two_material(const ExperimentConfig& config, double k1, double k2);

extern const std::vector<double> kDefaultEpsSweep;     // 1e-8 .. 1e-1
extern const std::vector<double> kDefaultLengthSweep;  // 1e4 .. 1e-2

}  // namespace qspai
