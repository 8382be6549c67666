#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <json.hpp>

#include "qspai/qubo.hpp"

using namespace qspai;

namespace {

DenseSmallMatrix random_spd(int s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    DenseSmallMatrix B(s);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) B(a, b) = val(rng);
    DenseSmallMatrix A(s);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            double sum = 0.0;
            for (int k = 0; k < s; ++k) sum += B(k, a) * B(k, b);
            A(a, b) = sum + (a == b ? double(s) : 0.0);
        }
    return A;
}

// Pi(m) = 0.5 m'Am - m[i], the quantity the box QUBO must reproduce
double box_energy(const DenseSmallMatrix& A, const DenseVector& m, int i) {
    double quad = 0.0;
    for (int a = 0; a < A.size(); ++a)
        for (int b = 0; b < A.size(); ++b) quad += m[a] * A(a, b) * m[b];
    return 0.5 * quad - m[i];
}

QuboProblem random_qubo(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> diag(n), off(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (auto& v : diag) v = val(rng);
    for (auto& v : off) v = val(rng);
    return QuboProblem(n, diag, off, val(rng));
}

}  // namespace

TEST_CASE("QuboProblem shape and finiteness checks") {
    CHECK_THROWS(QuboProblem(0, {}, {}, 0.0));
    CHECK_THROWS(QuboProblem(2, {1.0}, {0.0}, 0.0));
    CHECK_THROWS(QuboProblem(2, {1.0, 1.0}, {}, 0.0));
    CHECK_THROWS(QuboProblem(1, {std::nan("")}, {}, 0.0));
    CHECK_THROWS(QuboProblem(1, {1.0}, {}, std::numeric_limits<double>::infinity()));

    QuboProblem p(3, {1.0, 2.0, 3.0}, {0.1, 0.2, 0.3}, 0.5);
    CHECK(p.n_vars() == 3);
    CHECK(p.off(0, 1) == 0.1);
    CHECK(p.off(0, 2) == 0.2);
    CHECK(p.off(1, 2) == 0.3);
    CHECK(p.energy_mask(0) == 0.5);  // empty state is exactly the offset
    CHECK(p.max_abs_coeff() == 3.0);
    CHECK(p.min_nonzero_abs_coeff() == 0.1);
}

TEST_CASE("build_box_qubo baseline example") {
    DenseSmallMatrix A(1);
    A(0, 0) = 4.0;
    auto p = build_box_qubo(A, 0, {0.0}, 1.0);
    REQUIRE(p.n_vars() == 2);
    CHECK(p.diag()[0] == 10.0);
    CHECK(p.diag()[1] == 1.0);
    CHECK(p.off(0, 1) == -8.0);
    CHECK(p.offset() == 0.0);

    // all four states, q1 in bit 0 and q2 in bit 1
    CHECK(p.energy_mask(0b00) == 0.0);
    CHECK(p.energy_mask(0b10) == 1.0);
    CHECK(p.energy_mask(0b01) == 10.0);
    CHECK(p.energy_mask(0b11) == 3.0);
}

TEST_CASE("build_box_qubo offset carries the center energy") {
    DenseSmallMatrix A(1);
    A(0, 0) = 4.0;
    auto p = build_box_qubo(A, 0, {0.25}, 0.25);
    CHECK(p.offset() == -0.125);
    CHECK(p.energy_mask(0) == box_energy(A, {0.25}, 0));
}

TEST_CASE("build_box_qubo input validation") {
    DenseSmallMatrix A(2);
    A(0, 0) = 4.0;
    A(1, 1) = 4.0;
    A(0, 1) = -1.0;
    A(1, 0) = -2.0;  // asymmetric
    CHECK_THROWS(build_box_qubo(A, 0, {0.0, 0.0}, 1.0));
    A(1, 0) = -1.0;
    CHECK_THROWS(build_box_qubo(A, 2, {0.0, 0.0}, 1.0));
    CHECK_THROWS(build_box_qubo(A, 0, {0.0}, 1.0));
    CHECK_THROWS(build_box_qubo(A, 0, {0.0, 0.0}, 0.0));
    CHECK_THROWS(build_box_qubo(A, 0, {0.0, 0.0}, -1.0));
}

TEST_CASE("encoding matches the quadratic form on every state") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> val(-0.5, 0.5);
    for (int s = 1; s <= 5; ++s) {
        for (double L : {0.1, 1.0, 10.0}) {
            auto A = random_spd(s, rng);
            DenseVector c(s);
            for (auto& v : c) v = val(rng);
            const int i = s / 2;
            auto p = build_box_qubo(A, i, c, L);
            for (std::uint64_t mask = 0; mask < (1ULL << (2 * s)); ++mask) {
                DenseVector m(s);
                for (int a = 0; a < s; ++a) {
                    const double q1 = (mask >> a) & 1u;
                    const double q2 = (mask >> (s + a)) & 1u;
                    m[a] = c[a] + L * (-2.0 * q1 + q2);
                }
                const double direct = box_energy(A, m, i);
                const double viaq = p.energy_mask(mask);
                CHECK(std::abs(viaq - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
            }
        }
    }
}

TEST_CASE("solve_exact examples") {
    DenseSmallMatrix A(1);
    A(0, 0) = 4.0;
    auto p = build_box_qubo(A, 0, {0.0}, 1.0);
    auto sol = solve_exact(p);
    CHECK(sol.bits == std::vector<std::uint8_t>{0, 0});
    CHECK(sol.energy == 0.0);

    auto single = solve_exact(QuboProblem(1, {-1.0}, {}, 0.0));
    CHECK(single.bits == std::vector<std::uint8_t>{1});
    CHECK(single.energy == -1.0);

    // all-zero coefficients: every state ties, the all-zero mask wins
    auto tie = solve_exact(QuboProblem(3, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 0.25));
    CHECK(tie.mask() == 0);
    CHECK(tie.energy == 0.25);

    CHECK_THROWS(solve_exact(QuboProblem(25, std::vector<double>(25, 0.0),
                                         std::vector<double>(300, 0.0), 0.0)));
    CHECK_THROWS(solve_exact_serial(QuboProblem(25, std::vector<double>(25, 0.0),
                                                std::vector<double>(300, 0.0), 0.0)));
}

TEST_CASE("solve_exact equals brute force and its serial reference") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + int(rng() % 12);
        auto p = random_qubo(n, rng);

        double best_e = std::numeric_limits<double>::infinity();
        std::uint64_t best_m = 0;
        for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
            const double e = p.energy_mask(m);
            if (e < best_e || (e == best_e && m < best_m)) {
                best_e = e;
                best_m = m;
            }
        }

        auto sol = solve_exact(p);
        CHECK(sol.energy == best_e);
        CHECK(sol.mask() == best_m);

        auto ser = solve_exact_serial(p);
        CHECK(ser.energy == sol.energy);
        CHECK(ser.mask() == sol.mask());
    }
}

TEST_CASE("energy helper") {
    QuboProblem p(2, {1.0, 2.0}, {-3.0}, 0.5);
    CHECK(energy(p, {0, 0}) == 0.5);
    CHECK(energy(p, {1, 1}) == 0.5);  // 0.5 + 1 + 2 - 3
    CHECK_THROWS(energy(p, {1}));
}

TEST_CASE("solve_sa is deterministic and thread-count independent") {
    std::mt19937_64 rng(5);
    auto p = random_qubo(12, rng);
    SaConfig cfg;
    cfg.num_samples = 20;
    cfg.sweeps = 50;
    cfg.rng_seed = 13;

    auto a = solve_sa(p, cfg);
    auto b = solve_sa(p, cfg);
    CHECK(a.mask() == b.mask());
    CHECK(a.energy == b.energy);

    auto ser = solve_sa_serial(p, cfg);
    CHECK(a.mask() == ser.mask());
    CHECK(a.energy == ser.energy);

    cfg.rng_seed = 14;
    auto c = solve_sa(p, cfg);
    // a different seed may land elsewhere but never below the exact optimum
    CHECK(c.energy >= solve_exact(p).energy);
}

TEST_CASE("solve_sa finds small optima at default settings") {
    DenseSmallMatrix A(1);
    A(0, 0) = 4.0;
    auto p = build_box_qubo(A, 0, {0.0}, 1.0);
    SaConfig cfg;  // defaults: 100 chains, 1000 sweeps
    CHECK(cfg.num_samples == 100);
    CHECK(cfg.sweeps == 1000);
    auto sol = solve_sa(p, cfg);
    CHECK(sol.energy == 0.0);
    CHECK(sol.mask() == 0);
}

TEST_CASE("solve_sa matches the exact solver on random 10-var instances") {
    std::mt19937_64 rng(777);
    SaConfig cfg;
    int hits = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        auto p = random_qubo(10, rng);
        cfg.rng_seed = static_cast<std::uint64_t>(t);
        auto sa = solve_sa(p, cfg);
        auto ex = solve_exact(p);
        CHECK(sa.energy >= ex.energy);  // SA can never beat the true optimum
        CHECK(sa.energy == p.energy_mask(sa.mask()));
        if (sa.energy == ex.energy) ++hits;
    }
    CHECK(hits >= trials - 1);
}

TEST_CASE("sa configuration validation") {
    QuboProblem p(2, {1.0, -1.0}, {0.5}, 0.0);
    SaConfig cfg;
    cfg.num_samples = 0;
    CHECK_THROWS(solve_sa(p, cfg));
    cfg = SaConfig{};
    cfg.sweeps = 0;
    CHECK_THROWS(solve_sa(p, cfg));
    cfg = SaConfig{};
    cfg.hot = -1.0;
    CHECK_THROWS(solve_sa(p, cfg));
    cfg = SaConfig{};
    cfg.hot = 0.5;
    cfg.cold = 2.0;  // inverted explicit schedule
    CHECK_THROWS(solve_sa(p, cfg));

    // all-zero problem still runs with the fallback schedule
    QuboProblem z(2, {0.0, 0.0}, {0.0}, 0.0);
    auto sol = solve_sa(z, SaConfig{});
    CHECK(sol.energy == 0.0);
}

TEST_CASE("to_json emits the sparse upper triangle") {
    QuboProblem p(3, {1.0, 0.0, -2.0}, {0.5, 0.0, -0.25}, 0.125);
    auto j = nlohmann::json::parse(p.to_json());
    CHECK(j["n_vars"] == 3);
    CHECK(j["diag"].size() == 3);
    CHECK(j["offset"] == 0.125);
    REQUIRE(j["off"].size() == 2);  // zero coefficient omitted
    CHECK(j["off"][0][0] == 0);
    CHECK(j["off"][0][1] == 1);
    CHECK(j["off"][0][2] == 0.5);
    CHECK(j["off"][1][2] == -0.25);
}
