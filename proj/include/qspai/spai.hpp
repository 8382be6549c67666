#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qspai/qubo.hpp"
#include "qspai/sparse.hpp"

namespace qspai {

/// Minimizes one QUBO; plugged into the box algorithm so the exact and
/// annealing backends are interchangeable.
using QuboBackend = std::function<QuboSolution(const QuboProblem&)>;

QuboBackend make_exact_backend();
QuboBackend make_sa_backend(const SaConfig& cfg);

struct BoxConfig {
    double eps_box = 1e-6;
    double L0 = 1.0;
    int iter_max = 100;
};

struct BoxState {
    DenseVector c;
    double L = 0.0;
    double pi_min = 0.0;
    int iters = 0;
    bool hit_cap = false;
};

/// Per-iteration record of one box run, for tests and diagnostics.
struct BoxStep {
    double pi_star;
    double pi_min;
    double L;
    bool translated;
};

struct BoxSolveResult {
    DenseVector m_hat;
    BoxState state;
};

/// The box loop: from c = 0, L = L0, repeatedly minimize the box QUBO;
/// recenter on a strictly better minimizer (translation), otherwise halve
/// L (contraction); stop when L < eps_box or the iteration cap is hit.
/// pi_min is anchored to the canonical energy of the current center (the
/// QUBO offset), which keeps pi_star <= pi_min exact in floating point.
BoxSolveResult sparse_box_solve(const DenseSmallMatrix& A, int i, const BoxConfig& cfg,
                                const QuboBackend& backend,
                                std::vector<BoxStep>* trace = nullptr);

/// Dense Gaussian elimination with partial pivoting solving A x = e_i;
/// the independent accuracy oracle for the box algorithm.
DenseVector direct_column_oracle(const DenseSmallMatrix& A, int i);

/// Canonical byte encoding of (s, i, A_j row-major as exact 64-bit
/// values) for column j. Columns with equal signatures have equal
/// reduced systems and therefore equal solutions, so one box solve
/// serves the whole family.
std::string column_signature(const SymSparseMatrix& K, int j);

struct SpaiStats {
    int unique_families = 0;
    std::vector<int> per_family_iters;
    long long total_qubo_solves = 0;
    std::vector<int> hit_cap_families;
    double build_seconds = 0.0;
};

struct SpaiPreconditioner {
    SymSparseMatrix M;
    SpaiStats stats;
};

/// Column-by-column SPAI build on K's own sparsity pattern. With the
/// cache enabled each signature family is solved once and the solution
/// copied to every member column; families are independent and solved
/// across OpenMP threads, with output identical to the serial order.
SpaiPreconditioner compute_spai(const SymSparseMatrix& K, const BoxConfig& cfg,
                                const QuboBackend& backend, bool use_cache = true);

/// Stats as JSON ({unique_families, per_family_iters, total_qubo_solves,
/// hit_cap_families}); wall time is deliberately not serialized so
/// repeated runs emit identical bytes.
std::string spai_stats_json(const SpaiStats& stats);

}  // namespace qspai
