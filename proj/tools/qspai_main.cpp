// qspai: assemble a 2D FD Poisson system, build the QUBO-based SPAI
// preconditioner, and benchmark CG against Q-PCG.
//
// Exit codes: 0 all solves converged, 2 at least one did not, 1 error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qspai/experiment.hpp"

namespace {

using qspai::BackendKind;
using qspai::ExperimentConfig;
using qspai::ExperimentReport;

struct CliState {
    ExperimentConfig cfg;
    std::string backend = "exact";
    bool no_cache = false;
    std::vector<double> eps_values;
    std::vector<double> box_lengths;
};

void add_common_options(CLI::App* cmd, CliState& st) {
    cmd->set_help_flag("--help", "print help");  // frees -h/--h for the spacing option
    cmd->add_option("--gx", st.cfg.gx, "interior nodes in x")->check(CLI::PositiveNumber);
    cmd->add_option("--gy", st.cfg.gy, "interior nodes in y")->check(CLI::PositiveNumber);
    cmd->add_option("--h", st.cfg.h, "grid spacing")->check(CLI::PositiveNumber);
    cmd->add_option("--source-f", st.cfg.source_f, "constant source term");
    cmd->add_option("--eps-box", st.cfg.eps_box, "box tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--box-length", st.cfg.box_length, "initial box length")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-box-iters", st.cfg.max_box_iters, "box iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cg-tol", st.cfg.cg_tol, "relative residual tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-cg-iters", st.cfg.max_cg_iters, "CG/PCG iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--backend", st.backend, "QUBO solver backend")
        ->check(CLI::IsMember({"exact", "sa"}));
    cmd->add_option("--seed", st.cfg.sa_seed, "annealing RNG seed");
    cmd->add_option("--samples", st.cfg.sa_samples, "annealing chains per QUBO")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--sweeps", st.cfg.sa_sweeps, "annealing sweeps per chain")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-cache", st.no_cache, "solve every column, no family cache");
    cmd->add_option("--out", st.cfg.out_dir, "output directory");
    cmd->add_flag("--export-k", st.cfg.export_k, "write the system matrix (Matrix Market)");
    cmd->add_flag("--export-m", st.cfg.export_m, "write the preconditioner (Matrix Market)");
}

void finalize(CliState& st) {
    st.cfg.backend = st.backend == "sa" ? BackendKind::Sa : BackendKind::Exact;
    st.cfg.cache = !st.no_cache;
}

void print_report(const ExperimentReport& r) {
    std::printf("[%s] cg: %d iters (%s)  pcg: %d iters (%s)", r.config.out_dir.c_str(),
                r.cg_iterations, r.cg_converged ? "converged" : "NOT converged",
                r.pcg_iterations, r.pcg_status.c_str());
    if (r.cg_converged && r.pcg_converged) std::printf("  speedup %.2f", r.speedup);
    std::printf("  families %d  build %.3fs  wall %.3fs\n", r.spai_stats.unique_families,
                r.spai_stats.build_seconds, r.wall_seconds);
}

int exit_code(const std::vector<ExperimentReport>& reports) {
    for (const auto& r : reports) {
        if (!r.cg_converged || !r.pcg_converged) return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO-built SPAI preconditioning benchmark for 2D FD Poisson systems"};
    app.require_subcommand(1);

    CliState st;

    CLI::App* run = app.add_subcommand("run", "single experiment with the default problem");
    add_common_options(run, st);
    run->add_flag("--split", st.cfg.split, "vertical two-material split");
    run->add_option("--k", st.cfg.k, "uniform conductivity")->check(CLI::PositiveNumber);
    run->add_option("--k1", st.cfg.k1, "left conductivity (with --split)")
        ->check(CLI::PositiveNumber);
    run->add_option("--k2", st.cfg.k2, "right conductivity (with --split)")
        ->check(CLI::PositiveNumber);

    CLI::App* sweep_eps = app.add_subcommand("sweep-eps", "box-tolerance sweep (Table 3 layout)");
    add_common_options(sweep_eps, st);
    sweep_eps->add_option("--eps", st.eps_values, "tolerances to sweep");

    CLI::App* sweep_len =
        app.add_subcommand("sweep-length", "initial-box-length sweep (Table 4 layout)");
    add_common_options(sweep_len, st);
    sweep_len->add_option("--lengths", st.box_lengths, "box lengths to sweep");

    CLI::App* two_mat = app.add_subcommand("two-material", "vertical-split conductivity run");
    add_common_options(two_mat, st);
    double k1 = 1.0;
    double k2 = 10.0;
    two_mat->add_option("--k1", k1, "left conductivity")->check(CLI::PositiveNumber);
    two_mat->add_option("--k2", k2, "right conductivity")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    finalize(st);

    try {
        std::vector<ExperimentReport> reports;
        if (run->parsed()) {
            reports.push_back(qspai::run_single(st.cfg));
        } else if (sweep_eps->parsed()) {
            const auto& eps = st.eps_values.empty() ? qspai::kDefaultEpsSweep : st.eps_values;
            reports = qspai::run_sweep_eps(st.cfg, eps);
        } else if (sweep_len->parsed()) {
            const auto& lens =
                st.box_lengths.empty() ? qspai::kDefaultLengthSweep : st.box_lengths;
            reports = qspai::run_sweep_length(st.cfg, lens);
        } else if (two_mat->parsed()) {
            reports.push_back(qspai::run_two_material(st.cfg, k1, k2));
        }
        for (const auto& r : reports) print_report(r);
        return exit_code(reports);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
