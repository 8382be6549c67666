#include "qspai/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qspai/matrix_market.hpp"

namespace qspai {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const std::vector<double> kDefaultEpsSweep = {1e-8, 1e-6, 1e-4, 1e-2, 1e-1};
const std::vector<double> kDefaultLengthSweep = {1e4, 1e2, 1e1, 1.0, 1e-1, 1e-2};

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

const char* backend_name(BackendKind b) {
    return b == BackendKind::Exact ? "exact" : "sa";
}

ordered_json config_json(const ExperimentConfig& c) {
    ordered_json j;
    j["gx"] = c.gx;
    j["gy"] = c.gy;
    j["h"] = c.h;
    if (c.split) {
        j["material"] = ordered_json{{"type", "vertical_split"}, {"k1", c.k1}, {"k2", c.k2}};
    } else {
        j["material"] = ordered_json{{"type", "uniform"}, {"k", c.k}};
    }
    j["source_f"] = c.source_f;
    j["eps_box"] = c.eps_box;
    j["box_length"] = c.box_length;
    j["max_box_iters"] = c.max_box_iters;
    j["cg_tol"] = c.cg_tol;
    j["max_cg_iters"] = c.max_cg_iters;
    j["backend"] = backend_name(c.backend);
    if (c.backend == BackendKind::Sa) {
        j["sa_seed"] = c.sa_seed;
        j["sa_samples"] = c.sa_samples;
        j["sa_sweeps"] = c.sa_sweeps;
    }
    j["cache"] = c.cache;
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string report_json(const ExperimentReport& r) {
    ordered_json j;
    j["config"] = config_json(r.config);
    j["cg"] = ordered_json{{"iterations", r.cg_iterations},
                           {"converged", r.cg_converged},
                           {"final_relative_residual", r.cg_final_relative_residual}};
    j["pcg"] = ordered_json{{"iterations", r.pcg_iterations},
                            {"converged", r.pcg_converged},
                            {"status", r.pcg_status},
                            {"final_relative_residual", r.pcg_final_relative_residual}};
    j["spai"] = ordered_json::parse(spai_stats_json(r.spai_stats));
    if (r.cg_converged && r.pcg_converged) {
        j["speedup"] = r.speedup;
    } else {
        j["speedup"] = nullptr;
    }
    j["artifacts"] = r.artifacts;
    return j.dump(2) + "\n";
}

ExperimentReport run_single(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentReport report;
    report.config = config;

    const GridSpec grid{config.gx, config.gy, config.h};
    const MaterialField mat = config.split
                                  ? material_vertical_split(grid, config.k1, config.k2)
                                  : material_uniform(grid, config.k);
    const PoissonProblem problem = assemble_problem(grid, mat, config.source_f);

    const BoxConfig box{config.eps_box, config.box_length, config.max_box_iters};
    const QuboBackend backend =
        config.backend == BackendKind::Exact
            ? make_exact_backend()
            : make_sa_backend(SaConfig{config.sa_samples, config.sa_sweeps, 0.0, 0.0,
                                       config.sa_seed});
    const SpaiPreconditioner spai = compute_spai(problem.K, box, backend, config.cache);
    report.spai_stats = spai.stats;

    const CgConfig cg_cfg{config.cg_tol, config.max_cg_iters};
    const SolveResult cg_res = cg(problem.K, problem.b, cg_cfg);
    report.cg_iterations = cg_res.trace.iterations;
    report.cg_converged = cg_res.trace.converged;
    report.cg_final_relative_residual = cg_res.trace.final_relative_residual;

    SolveResult pcg_res;
    bool pcg_ran = false;
    try {
        pcg_res = pcg(problem.K, spai.M, problem.b, cg_cfg);
        pcg_ran = true;
        report.pcg_iterations = pcg_res.trace.iterations;
        report.pcg_converged = pcg_res.trace.converged;
        report.pcg_final_relative_residual = pcg_res.trace.final_relative_residual;
        report.pcg_status = pcg_res.trace.converged ? "converged" : "max_iterations";
    } catch (const std::runtime_error&) {
        // Indefinite preconditioner aborts the iteration; record it and
        // keep going so sweeps can cover the whole parameter range.
        report.pcg_status = "breakdown";
    }

    if (report.cg_converged && report.pcg_converged) {
        report.speedup = static_cast<double>(report.cg_iterations) /
                         static_cast<double>(report.pcg_iterations);
    }

    const fs::path dir(config.out_dir);
    fs::create_directories(dir);

    write_trace_csv(cg_res.trace, (dir / "cg_trace.csv").string());
    report.artifacts.push_back("cg_trace.csv");
    if (pcg_ran) {
        write_trace_csv(pcg_res.trace, (dir / "pcg_trace.csv").string());
        report.artifacts.push_back("pcg_trace.csv");
    }

    const DenseVector& field = (pcg_ran && pcg_res.trace.converged) ? pcg_res.x : cg_res.x;
    write_field_csv(grid, field, (dir / "solution_field.csv").string());
    report.artifacts.push_back("solution_field.csv");

    write_text(dir / "spai_stats.json", spai_stats_json(report.spai_stats));
    report.artifacts.push_back("spai_stats.json");

    if (config.export_k) {
        write_matrix_market(problem.K, (dir / "system.mtx").string());
        report.artifacts.push_back("system.mtx");
    }
    if (config.export_m) {
        write_matrix_market(spai.M, (dir / "preconditioner.mtx").string());
        report.artifacts.push_back("preconditioner.mtx");
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text(dir / "report.json", report_json(report));
    report.artifacts.push_back("report.json");
    return report;
}

std::vector<ExperimentReport> run_sweep_eps(const ExperimentConfig& config,
                                            const std::vector<double>& eps_values) {
    std::vector<ExperimentReport> reports;
    reports.reserve(eps_values.size());
    for (double eps : eps_values) {
        ExperimentConfig sub = config;
        sub.eps_box = eps;
        sub.out_dir = (fs::path(config.out_dir) / ("eps_" + fmt_g(eps))).string();
        reports.push_back(run_single(sub));
    }
    return reports;
}

std::vector<ExperimentReport> run_sweep_length(const ExperimentConfig& config,
                                               const std::vector<double>& box_lengths) {
    std::vector<ExperimentReport> reports;
    reports.reserve(box_lengths.size());
    for (double L : box_lengths) {
        ExperimentConfig sub = config;
        sub.box_length = L;
        sub.out_dir = (fs::path(config.out_dir) / ("L_" + fmt_g(L))).string();
        reports.push_back(run_single(sub));
    }
    return reports;
}

ExperimentReport run_two_material(const ExperimentConfig& config, double k1, double k2) {
    ExperimentConfig sub = config;
    sub.split = true;
    sub.k1 = k1;
    sub.k2 = k2;
    return run_single(sub);
}

}  // namespace qspai
