#include "qspai/krylov.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qspai {

namespace {

double dot(const DenseVector& a, const DenseVector& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

// One driver for both solvers; M == nullptr means identity preconditioning.
SolveResult pcg_impl(const SymSparseMatrix& K, const SymSparseMatrix* M, const DenseVector& b,
                     const CgConfig& cfg) {
    if (static_cast<int>(b.size()) != K.n()) throw std::invalid_argument("cg: dimension mismatch");
    if (M && M->n() != K.n()) throw std::invalid_argument("cg: preconditioner dimension mismatch");
    if (!(cfg.tol > 0.0) || cfg.max_iter < 1) throw std::invalid_argument("cg: invalid config");

    SolveResult out;
    out.x.assign(b.size(), 0.0);

    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        out.trace.residual_norms = {0.0};
        out.trace.converged = true;
        return out;
    }
    out.trace.residual_norms.push_back(b_norm);

    DenseVector r = b;
    DenseVector z, p, q;
    if (M) {
        spmv(*M, r, z);
    } else {
        z = r;
    }
    double rz = dot(r, z);
    if (M && rz <= 0.0) throw std::runtime_error("pcg: indefinite preconditioner (r'z <= 0)");
    p = z;

    for (int t = 1; t <= cfg.max_iter; ++t) {
        spmv(K, p, q);
        const double pq = dot(p, q);
        if (pq <= 0.0) throw std::runtime_error("cg: breakdown, matrix is not SPD (p'Kp <= 0)");
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += alpha * p[i];
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= alpha * q[i];

        const double r_norm = std::sqrt(dot(r, r));
        out.trace.residual_norms.push_back(r_norm);
        out.trace.iterations = t;
        out.trace.final_relative_residual = r_norm / b_norm;
        if (out.trace.final_relative_residual <= cfg.tol) {
            out.trace.converged = true;
            break;
        }
        if (t == cfg.max_iter) break;

        if (M) {
            spmv(*M, r, z);
        } else {
            z = r;
        }
        const double rz_next = dot(r, z);
        if (M && rz_next <= 0.0)
            throw std::runtime_error("pcg: indefinite preconditioner (r'z <= 0)");
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    return out;
}

}  // namespace

SolveResult cg(const SymSparseMatrix& K, const DenseVector& b, const CgConfig& cfg) {
    return pcg_impl(K, nullptr, b, cfg);
}

SolveResult pcg(const SymSparseMatrix& K, const SymSparseMatrix& M, const DenseVector& b,
                const CgConfig& cfg) {
    return pcg_impl(K, &M, b, cfg);
}

void write_trace_csv(const ConvergenceTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "iteration,residual\n";
    char buf[64];
    for (std::size_t t = 0; t < trace.residual_norms.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", t, trace.residual_norms[t]);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qspai
