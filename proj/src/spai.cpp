#include "qspai/spai.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace qspai {

QuboBackend make_exact_backend() {
    return [](const QuboProblem& p) { return solve_exact(p); };
}

QuboBackend make_sa_backend(const SaConfig& cfg) {
    return [cfg](const QuboProblem& p) { return solve_sa(p, cfg); };
}

BoxSolveResult sparse_box_solve(const DenseSmallMatrix& A, int i, const BoxConfig& cfg,
                                const QuboBackend& backend, std::vector<BoxStep>* trace) {
    const int s = A.size();
    if (!A.is_symmetric()) throw std::invalid_argument("box solve needs a symmetric matrix");
    if (i < 0 || i >= s) throw std::invalid_argument("unit-vector index out of range");
    if (!(cfg.eps_box > 0.0) || !(cfg.L0 > 0.0) || cfg.iter_max < 1)
        throw std::invalid_argument("invalid box configuration");

    DenseVector c(s, 0.0);
    double L = cfg.L0;
    double pi_min = 0.0;
    int iters = 0;
    bool hit_cap = false;

    while (true) {
        const QuboProblem p = build_box_qubo(A, i, c, L);
        pi_min = p.offset();  // canonical energy of the current center
        const QuboSolution sol = backend(p);
        const bool translated = sol.energy < pi_min;
        if (translated) {
            for (int a = 0; a < s; ++a) {
                const double t = -2.0 * sol.bits[a] + sol.bits[s + a];
                c[a] += L * t;
            }
        } else {
            L /= 2.0;
        }
        ++iters;
        if (trace) trace->push_back({sol.energy, pi_min, L, translated});
        if (L < cfg.eps_box) break;
        if (iters >= cfg.iter_max) {
            hit_cap = true;
            break;
        }
    }

    // Report the canonical energy of the final center.
    pi_min = build_box_qubo(A, i, c, 1.0).offset();
    BoxState state{c, L, pi_min, iters, hit_cap};
    return {std::move(c), std::move(state)};
}

DenseVector direct_column_oracle(const DenseSmallMatrix& A, int i) {
    const int s = A.size();
    if (i < 0 || i >= s) throw std::invalid_argument("unit-vector index out of range");

    // Gaussian elimination with partial pivoting on a working copy.
    std::vector<double> work(A.values());
    DenseVector x(s, 0.0);
    x[i] = 1.0;
    auto at = [&work, s](int r, int c) -> double& {
        return work[static_cast<std::size_t>(r) * s + c];
    };

    for (int col = 0; col < s; ++col) {
        int piv = col;
        for (int r = col + 1; r < s; ++r)
            if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
        if (at(piv, col) == 0.0) throw std::runtime_error("singular matrix in column oracle");
        if (piv != col) {
            for (int c = col; c < s; ++c) std::swap(at(piv, c), at(col, c));
            std::swap(x[piv], x[col]);
        }
        for (int r = col + 1; r < s; ++r) {
            const double f = at(r, col) / at(col, col);
            if (f == 0.0) continue;
            for (int c = col; c < s; ++c) at(r, c) -= f * at(col, c);
            x[r] -= f * x[col];
        }
    }
    for (int r = s - 1; r >= 0; --r) {
        double sum = x[r];
        for (int c = r + 1; c < s; ++c) sum -= at(r, c) * x[c];
        x[r] = sum / at(r, r);
    }
    return x;
}

namespace {

std::string encode_signature(int s, int i, const DenseSmallMatrix& A) {
    std::string bytes;
    bytes.reserve(8 + A.values().size() * 8);
    auto put_u32 = [&bytes](std::uint32_t v) {
        char buf[4];
        std::memcpy(buf, &v, 4);
        bytes.append(buf, 4);
    };
    put_u32(static_cast<std::uint32_t>(s));
    put_u32(static_cast<std::uint32_t>(i));
    for (const double v : A.values()) {
        const std::uint64_t u = std::bit_cast<std::uint64_t>(v);
        char buf[8];
        std::memcpy(buf, &u, 8);
        bytes.append(buf, 8);
    }
    return bytes;
}

int position_of(const std::vector<int>& support, int j) {
    for (std::size_t a = 0; a < support.size(); ++a)
        if (support[a] == j) return static_cast<int>(a);
    throw std::logic_error("column not present in its own support");
}

}  // namespace

std::string column_signature(const SymSparseMatrix& K, int j) {
    const std::vector<int> support = column_support(K, j);
    const DenseSmallMatrix A = principal_submatrix(K, support);
    return encode_signature(static_cast<int>(support.size()), position_of(support, j), A);
}

SpaiPreconditioner compute_spai(const SymSparseMatrix& K, const BoxConfig& cfg,
                                const QuboBackend& backend, bool use_cache) {
    const auto t_start = std::chrono::steady_clock::now();
    const int n = K.n();

    struct Family {
        DenseSmallMatrix A;
        int i;
        std::vector<int> members;
    };

    // Group columns by value signature; ascending j fixes the family order.
    std::vector<Family> families;
    std::vector<int> family_of(n, -1);
    std::unordered_map<std::string, int> family_by_sig;
    for (int j = 0; j < n; ++j) {
        const std::vector<int> support = column_support(K, j);
        DenseSmallMatrix A = principal_submatrix(K, support);
        const int i = position_of(support, j);
        std::string sig = encode_signature(static_cast<int>(support.size()), i, A);
        auto [it, inserted] = family_by_sig.try_emplace(std::move(sig),
                                                        static_cast<int>(families.size()));
        if (inserted) families.push_back({std::move(A), i, {}});
        families[it->second].members.push_back(j);
        family_of[j] = it->second;
    }
    const int num_families = static_cast<int>(families.size());

    SpaiStats stats;
    stats.unique_families = num_families;
    stats.per_family_iters.resize(num_families);

    std::vector<DenseVector> solution_of_family(num_families);
    std::vector<char> family_hit_cap(num_families, 0);

    if (use_cache) {
        // One box solve per family; families are independent.
#pragma omp parallel for schedule(dynamic)
        for (int f = 0; f < num_families; ++f) {
            BoxSolveResult res = sparse_box_solve(families[f].A, families[f].i, cfg, backend);
            solution_of_family[f] = std::move(res.m_hat);
            stats.per_family_iters[f] = res.state.iters;
            family_hit_cap[f] = res.state.hit_cap ? 1 : 0;
        }
        for (int f = 0; f < num_families; ++f)
            stats.total_qubo_solves += stats.per_family_iters[f];
    } else {
        // Solve every column; members of a family repeat identical work,
        // which is exactly what the cache-off mode is meant to show.
        std::vector<long long> column_iters(n, 0);
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < n; ++j) {
            const int f = family_of[j];
            BoxSolveResult res = sparse_box_solve(families[f].A, families[f].i, cfg, backend);
            column_iters[j] = res.state.iters;
            if (j == families[f].members.front()) {
                solution_of_family[f] = std::move(res.m_hat);
                stats.per_family_iters[f] = res.state.iters;
                family_hit_cap[f] = res.state.hit_cap ? 1 : 0;
            }
        }
        for (int j = 0; j < n; ++j) stats.total_qubo_solves += column_iters[j];
    }
    for (int f = 0; f < num_families; ++f)
        if (family_hit_cap[f]) stats.hit_cap_families.push_back(f);

    // Scatter each column's solution onto K's pattern, then force symmetry.
    SparseAccumulator acc(K);
    for (int j = 0; j < n; ++j) {
        const std::vector<int> support = column_support(K, j);
        const DenseVector& m_hat = solution_of_family[family_of[j]];
        for (std::size_t a = 0; a < support.size(); ++a) acc.set(support[a], j, m_hat[a]);
    }
    SymSparseMatrix M = symmetrize(acc);

    stats.build_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(M), std::move(stats)};
}

std::string spai_stats_json(const SpaiStats& stats) {
    nlohmann::ordered_json j;
    j["unique_families"] = stats.unique_families;
    j["per_family_iters"] = stats.per_family_iters;
    j["total_qubo_solves"] = stats.total_qubo_solves;
    j["hit_cap_families"] = stats.hit_cap_families;
    return j.dump(2);
}

}  // namespace qspai
