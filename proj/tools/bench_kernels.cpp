// Compares the OpenMP kernels against their serial reference
// implementations: wall time plus a bitwise-equality check, since the
// parallel paths are required to reproduce the serial results exactly.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qspai/poisson.hpp"
#include "qspai/qubo.hpp"
#include "qspai/sparse.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool equal) {
    std::printf("%-12s %10.4fs %10.4fs %8.2fx   %s\n", name, serial_s, parallel_s,
                serial_s / parallel_s, equal ? "bitwise equal" : "MISMATCH");
}

qspai::QuboProblem random_qubo(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::vector<double> diag(n);
    std::vector<double> off(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (auto& v : diag) v = coeff(rng);
    for (auto& v : off) v = coeff(rng);
    return qspai::QuboProblem(n, diag, off, 0.0);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n\n");
#endif
    std::printf("%-12s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    bool all_equal = true;

    {  // spmv on the default benchmark matrix
        const qspai::GridSpec grid{401, 301, 1.0};
        const auto K = qspai::assemble(grid, qspai::material_uniform(grid, 1.0));
        qspai::DenseVector x(static_cast<std::size_t>(grid.num_nodes()));
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (auto& v : x) v = unit(rng);
        qspai::DenseVector ys(x.size()), yp(x.size());
        const int reps = 200;

        auto t0 = Clock::now();
        for (int r = 0; r < reps; ++r) qspai::spmv_serial(K, x, ys);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        for (int r = 0; r < reps; ++r) qspai::spmv(K, x, yp);
        const double tp = seconds_since(t0);
        const bool equal = ys == yp;
        all_equal = all_equal && equal;
        report("spmv", ts, tp, equal);
    }

    {  // exhaustive QUBO ground-state search, 2^20 states
        std::mt19937_64 rng(2);
        const auto p = random_qubo(20, rng);
        auto t0 = Clock::now();
        const auto s = qspai::solve_exact_serial(p);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto par = qspai::solve_exact(p);
        const double tp = seconds_since(t0);
        const bool equal = s.bits == par.bits && s.energy == par.energy;
        all_equal = all_equal && equal;
        report("exact_qubo", ts, tp, equal);
    }

    {  // simulated annealing, 100 chains
        std::mt19937_64 rng(3);
        const auto p = random_qubo(10, rng);
        qspai::SaConfig cfg;
        cfg.rng_seed = 7;
        auto t0 = Clock::now();
        const auto s = qspai::solve_sa_serial(p, cfg);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto par = qspai::solve_sa(p, cfg);
        const double tp = seconds_since(t0);
        const bool equal = s.bits == par.bits && s.energy == par.energy;
        all_equal = all_equal && equal;
        report("sa_qubo", ts, tp, equal);
    }

    if (!all_equal) {
        std::printf("\nparallel kernels diverged from serial references\n");
        return 1;
    }
    return 0;
}
