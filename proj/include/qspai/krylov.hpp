#pragma once

#include <string>
#include <vector>

#include "qspai/sparse.hpp"

namespace qspai {

struct CgConfig {
    double tol = 1e-10;
    int max_iter = 50000;
};

struct ConvergenceTrace {
    std::vector<double> residual_norms;  // recurrence residual, iteration 0 first
    int iterations = 0;
    bool converged = false;
    double final_relative_residual = 0.0;
};

struct SolveResult {
    DenseVector x;
    ConvergenceTrace trace;
};

/// Conjugate gradient from x0 = 0, terminating on the relative recurrence
/// residual ||r||/||b|| <= tol. Throws on dimension mismatch and on
/// p'Kp <= 0 (non-SPD input).
SolveResult cg(const SymSparseMatrix& K, const DenseVector& b, const CgConfig& cfg);

/// Preconditioned conjugate gradient with z = M r applied by spmv; same
/// termination rule on the unpreconditioned residual. Additionally throws
/// when r'z <= 0 (indefinite preconditioner).
SolveResult pcg(const SymSparseMatrix& K, const SymSparseMatrix& M, const DenseVector& b,
                const CgConfig& cfg);

/// CSV export "iteration,residual".
void write_trace_csv(const ConvergenceTrace& trace, const std::string& path);

}  // namespace qspai
