#include "qspai/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qspai {

namespace {

constexpr int kExactCap = 24;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

struct BestState {
    double energy = std::numeric_limits<double>::infinity();
    std::uint64_t mask = 0;

    // Lexicographic (energy, mask): the all-zero state wins any tie and
    // the minimum is independent of how the state space is partitioned.
    bool improves(double e, std::uint64_t m) const {
        return e < energy || (e == energy && m < mask);
    }
};

QuboSolution make_solution(const QuboProblem& p, std::uint64_t mask) {
    QuboSolution sol;
    sol.bits.resize(p.n_vars());
    for (int k = 0; k < p.n_vars(); ++k) sol.bits[k] = (mask >> k) & 1u;
    sol.energy = p.energy_mask(mask);
    return sol;
}

}  // namespace

QuboProblem::QuboProblem(int n_vars, std::vector<double> diag, std::vector<double> off_upper,
                         double offset)
    : n_(n_vars), diag_(std::move(diag)), off_(std::move(off_upper)), offset_(offset) {
    if (n_ < 1) throw std::invalid_argument("qubo needs at least one variable");
    if (diag_.size() != static_cast<std::size_t>(n_) ||
        off_.size() != static_cast<std::size_t>(n_) * (n_ - 1) / 2)
        throw std::invalid_argument("qubo coefficient table has wrong shape");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::isfinite(offset_) || !std::all_of(diag_.begin(), diag_.end(), finite) ||
        !std::all_of(off_.begin(), off_.end(), finite))
        throw std::invalid_argument("qubo coefficients must be finite");
}

std::size_t QuboProblem::tri_index(int k, int l) const {
    // Upper triangle, row-major: row k starts after sum_{r<k} (n-1-r).
    const std::size_t start =
        static_cast<std::size_t>(k) * (n_ - 1) - static_cast<std::size_t>(k) * (k - 1) / 2;
    return start + static_cast<std::size_t>(l - k - 1);
}

double QuboProblem::energy_mask(std::uint64_t mask) const {
    double e = offset_;
    for (int k = 0; k < n_; ++k) {
        if (!((mask >> k) & 1u)) continue;
        e += diag_[k];
        for (int l = k + 1; l < n_; ++l)
            if ((mask >> l) & 1u) e += off_[tri_index(k, l)];
    }
    return e;
}

double QuboProblem::max_abs_coeff() const {
    double m = 0.0;
    for (double v : diag_) m = std::max(m, std::abs(v));
    for (double v : off_) m = std::max(m, std::abs(v));
    return m;
}

double QuboProblem::min_nonzero_abs_coeff() const {
    double m = 0.0;
    auto take = [&m](double v) {
        const double a = std::abs(v);
        if (a > 0.0 && (m == 0.0 || a < m)) m = a;
    };
    for (double v : diag_) take(v);
    for (double v : off_) take(v);
    return m;
}

std::string QuboProblem::to_json() const {
    nlohmann::ordered_json j;
    j["n_vars"] = n_;
    j["diag"] = diag_;
    auto off = nlohmann::ordered_json::array();
    for (int k = 0; k < n_; ++k)
        for (int l = k + 1; l < n_; ++l)
            if (const double v = off_[tri_index(k, l)]; v != 0.0)
                off.push_back({k, l, v});
    j["off"] = std::move(off);
    j["offset"] = offset_;
    return j.dump(2);
}

std::uint64_t QuboSolution::mask() const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k]) m |= 1ULL << k;
    return m;
}

QuboProblem build_box_qubo(const DenseSmallMatrix& A, int i, const DenseVector& c, double L) {
    const int s = A.size();
    if (!A.is_symmetric()) throw std::invalid_argument("box qubo needs a symmetric matrix");
    if (i < 0 || i >= s) throw std::invalid_argument("unit-vector index out of range");
    if (static_cast<int>(c.size()) != s) throw std::invalid_argument("center length mismatch");
    if (!(L > 0.0)) throw std::invalid_argument("box length must be positive");

    // Substituting m = c + L*t with t = -2 q1 + q2 into
    // 0.5 m^T A m - m[i] and folding q^2 = q gives the tables below;
    // the constant Pi(c) lands in the offset.
    DenseVector g(s, 0.0);
    for (int a = 0; a < s; ++a) {
        double sum = 0.0;
        for (int b = 0; b < s; ++b) sum += A(a, b) * c[b];
        g[a] = sum;
    }
    double offset = 0.0;
    for (int a = 0; a < s; ++a) offset += c[a] * g[a];
    offset = 0.5 * offset - c[i];

    const int n = 2 * s;
    const double L2 = L * L;
    std::vector<double> diag(n, 0.0);
    std::vector<double> off(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
    auto tri = [n](int k, int l) {
        return static_cast<std::size_t>(k) * (n - 1) - static_cast<std::size_t>(k) * (k - 1) / 2 +
               static_cast<std::size_t>(l - k - 1);
    };

    for (int a = 0; a < s; ++a) {
        const double lin = L * (g[a] - (a == i ? 1.0 : 0.0));
        const double quad = L2 * A(a, a);
        // t_a^2 = 4 q1 - 4 q1 q2 + q2
        diag[a] = -2.0 * lin + 2.0 * quad;
        diag[s + a] = lin + 0.5 * quad;
        off[tri(a, s + a)] = -2.0 * quad;
        for (int b = a + 1; b < s; ++b) {
            const double w = L2 * A(a, b);
            if (w == 0.0) continue;
            // t_a t_b = 4 q1a q1b - 2 q1a q2b - 2 q2a q1b + q2a q2b
            off[tri(a, b)] = 4.0 * w;
            off[tri(s + a, s + b)] = w;
            off[tri(a, s + b)] = -2.0 * w;
            off[tri(b, s + a)] = -2.0 * w;
        }
    }
    return QuboProblem(n, std::move(diag), std::move(off), offset);
}

double energy(const QuboProblem& p, const std::vector<std::uint8_t>& bits) {
    if (bits.size() != static_cast<std::size_t>(p.n_vars()))
        throw std::invalid_argument("bit vector length mismatch");
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k]) mask |= 1ULL << k;
    return p.energy_mask(mask);
}

QuboSolution solve_exact_serial(const QuboProblem& p) {
    if (p.n_vars() > kExactCap)
        throw std::invalid_argument("exact solver is capped at 24 variables");
    const std::uint64_t total = 1ULL << p.n_vars();
    BestState best;
    for (std::uint64_t m = 0; m < total; ++m) {
        const double e = p.energy_mask(m);
        if (best.improves(e, m)) best = {e, m};
    }
    return make_solution(p, best.mask);
}

QuboSolution solve_exact(const QuboProblem& p) {
    if (p.n_vars() > kExactCap)
        throw std::invalid_argument("exact solver is capped at 24 variables");
    const std::uint64_t total = 1ULL << p.n_vars();
    int num_chunks = 1;
#ifdef _OPENMP
    num_chunks = std::max(1, omp_get_max_threads());
#endif
    if (total < 1024) num_chunks = 1;
    const std::uint64_t chunk = (total + num_chunks - 1) / num_chunks;
    std::vector<BestState> partial(num_chunks);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < num_chunks; ++t) {
        const std::uint64_t lo = chunk * static_cast<std::uint64_t>(t);
        const std::uint64_t hi = std::min(total, lo + chunk);
        BestState local;
        for (std::uint64_t m = lo; m < hi; ++m) {
            const double e = p.energy_mask(m);
            if (local.improves(e, m)) local = {e, m};
        }
        partial[t] = local;
    }
    BestState best;
    for (const BestState& cand : partial)
        if (best.improves(cand.energy, cand.mask)) best = cand;
    return make_solution(p, best.mask);
}

namespace {

struct SaSchedule {
    double hot;
    double ratio;  // per-sweep geometric factor
};

SaSchedule resolve_schedule(const QuboProblem& p, const SaConfig& cfg) {
    if (cfg.num_samples < 1 || cfg.sweeps < 1)
        throw std::invalid_argument("sa config needs num_samples >= 1 and sweeps >= 1");
    if (cfg.hot < 0.0 || cfg.cold < 0.0)
        throw std::invalid_argument("sa temperatures must be nonnegative");

    double hot = cfg.hot > 0.0 ? cfg.hot : p.max_abs_coeff();
    if (hot <= 0.0) hot = 1.0;  // all-zero problem, any schedule works
    double cold = cfg.cold > 0.0 ? cfg.cold : 1e-3 * p.min_nonzero_abs_coeff();
    if (cold <= 0.0) cold = 1e-3 * hot;
    if (!(hot > cold)) {
        if (cfg.hot > 0.0 && cfg.cold > 0.0)
            throw std::invalid_argument("sa schedule needs hot > cold > 0");
        cold = 1e-3 * hot;
    }
    const double ratio = cfg.sweeps > 1 ? std::pow(cold / hot, 1.0 / (cfg.sweeps - 1)) : 1.0;
    return {hot, ratio};
}

double flip_delta(const QuboProblem& p, std::uint64_t mask, int k) {
    double field = p.diag()[k];
    for (int l = 0; l < k; ++l)
        if ((mask >> l) & 1u) field += p.off(l, k);
    for (int l = k + 1; l < p.n_vars(); ++l)
        if ((mask >> l) & 1u) field += p.off(k, l);
    return ((mask >> k) & 1u) ? -field : field;
}

BestState run_chain(const QuboProblem& p, const SaConfig& cfg, const SaSchedule& sched,
                    int chain) {
    std::mt19937_64 rng(splitmix64(cfg.rng_seed ^ (0x1234ABCD5678EF01ULL +
                                                   static_cast<std::uint64_t>(chain))));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const int n = p.n_vars();
    std::uint64_t mask = 0;
    for (int k = 0; k < n; ++k)
        if (uniform(rng) < 0.5) mask |= 1ULL << k;

    double e = p.energy_mask(mask);
    BestState best{e, mask};

    double temp = sched.hot;
    for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
        for (int k = 0; k < n; ++k) {
            const double de = flip_delta(p, mask, k);
            if (de <= 0.0 || uniform(rng) < std::exp(-de / temp)) {
                mask ^= 1ULL << k;
                e += de;
                if (best.improves(e, mask)) best = {e, mask};
            }
        }
        temp *= sched.ratio;
    }
    // Incremental energies drift; re-anchor on the canonical evaluation.
    best.energy = p.energy_mask(best.mask);
    return best;
}

QuboSolution reduce_chains(const QuboProblem& p, const std::vector<BestState>& chains) {
    BestState best;
    for (const BestState& cand : chains)
        if (best.improves(cand.energy, cand.mask)) best = cand;
    return make_solution(p, best.mask);
}

}  // namespace

QuboSolution solve_sa_serial(const QuboProblem& p, const SaConfig& cfg) {
    const SaSchedule sched = resolve_schedule(p, cfg);
    std::vector<BestState> chains(cfg.num_samples);
    for (int chain = 0; chain < cfg.num_samples; ++chain)
        chains[chain] = run_chain(p, cfg, sched, chain);
    return reduce_chains(p, chains);
}

QuboSolution solve_sa(const QuboProblem& p, const SaConfig& cfg) {
    const SaSchedule sched = resolve_schedule(p, cfg);
    std::vector<BestState> chains(cfg.num_samples);
#pragma omp parallel for schedule(dynamic)
    for (int chain = 0; chain < cfg.num_samples; ++chain)
        chains[chain] = run_chain(p, cfg, sched, chain);
    return reduce_chains(p, chains);
}

}  // namespace qspai
