#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qspai/sparse.hpp"

namespace qspai {

/// Upper-triangular QUBO over n binary variables with a constant offset:
/// energy(q) = sum diag[k] q_k + sum_{k<l} off(k,l) q_k q_l + offset.
/// The all-zero state always evaluates to the offset.
class QuboProblem {
public:
    QuboProblem(int n_vars, std::vector<double> diag, std::vector<double> off_upper,
                double offset);

    int n_vars() const { return n_; }
    double offset() const { return offset_; }
    const std::vector<double>& diag() const { return diag_; }

    double off(int k, int l) const { return off_[tri_index(k, l)]; }

    /// Energy of a bit assignment packed into a mask (bit k = variable k).
    /// The summation order is fixed (diag ascending, then pairs in
    /// (k, l) lexicographic order) so every caller sees identical rounding.
    double energy_mask(std::uint64_t mask) const;

    double max_abs_coeff() const;
    double min_nonzero_abs_coeff() const;

    std::string to_json() const;

private:
    std::size_t tri_index(int k, int l) const;

    int n_;
    std::vector<double> diag_;
    std::vector<double> off_;  // row-major upper triangle, size n(n-1)/2
    double offset_;
};

struct QuboSolution {
    std::vector<std::uint8_t> bits;
    double energy = 0.0;

    std::uint64_t mask() const;
};

/// Simulated-annealing backend settings. hot/cold of 0 mean "derive from
/// the problem": hot = max |coeff|, cold = 1e-3 * min nonzero |coeff|.
struct SaConfig {
    int num_samples = 100;
    int sweeps = 1000;
    double hot = 0.0;
    double cold = 0.0;
    std::uint64_t rng_seed = 0;
};

/// Builds the QUBO whose energy over (q1, q2) equals
/// 0.5 m^T A m - m[i] with m = c + L(-2 q1 + q2). Bits are ordered
/// q1[0..s-1] then q2[0..s-1]; the constant Pi(c) is carried in the
/// offset so energies are comparable across box iterations.
QuboProblem build_box_qubo(const DenseSmallMatrix& A, int i, const DenseVector& c, double L);

double energy(const QuboProblem& p, const std::vector<std::uint8_t>& bits);

/// Exhaustive ground-state search over all 2^n states (n <= 24), the
/// state space split across OpenMP threads. Ties break toward the lowest
/// bit vector read as a little-endian integer, so the all-zero state wins
/// any tie and the result is independent of the partition.
QuboSolution solve_exact(const QuboProblem& p);
QuboSolution solve_exact_serial(const QuboProblem& p);

/// Seeded single-spin-flip annealing over a geometric temperature
/// schedule; num_samples independent chains, run across OpenMP threads.
/// Chain seeds derive from (rng_seed, chain index) alone, so the result
/// is deterministic for a fixed (cfg, p) regardless of thread count.
QuboSolution solve_sa(const QuboProblem& p, const SaConfig& cfg);
QuboSolution solve_sa_serial(const QuboProblem& p, const SaConfig& cfg);

}  // namespace qspai
