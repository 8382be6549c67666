#include "qspai/poisson.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace qspai {

namespace {

void check_grid(const GridSpec& grid) {
    if (grid.gx < 1 || grid.gy < 1) throw std::invalid_argument("grid dimensions must be >= 1");
    if (!(grid.h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
}

}  // namespace

MaterialField::MaterialField(const GridSpec& grid, double fill)
    : cx_(grid.gx + 1), cy_(grid.gy + 1) {
    check_grid(grid);
    if (!(fill > 0.0)) throw std::invalid_argument("conductivity must be positive");
    k_.assign(static_cast<std::size_t>(cx_) * cy_, fill);
}

int node_index(int m, int n, const GridSpec& grid) {
    if (m < 0 || m >= grid.gx || n < 0 || n >= grid.gy)
        throw std::out_of_range("interior node coordinates out of range");
    return n * grid.gx + m;
}

MaterialField material_uniform(const GridSpec& grid, double k) {
    return MaterialField(grid, k);
}

MaterialField material_vertical_split(const GridSpec& grid, double k1, double k2) {
    if (!(k1 > 0.0) || !(k2 > 0.0)) throw std::invalid_argument("conductivity must be positive");
    MaterialField mat(grid, k1);
    const int split = (mat.cells_x() + 1) / 2;  // ceil((gx+1)/2), extra column goes left
    for (int cy = 0; cy < mat.cells_y(); ++cy)
        for (int cx = split; cx < mat.cells_x(); ++cx) mat.at(cx, cy) = k2;
    return mat;
}

SymSparseMatrix assemble(const GridSpec& grid, const MaterialField& mat) {
    check_grid(grid);
    if (mat.cells_x() != grid.gx + 1 || mat.cells_y() != grid.gy + 1)
        throw std::invalid_argument("material field does not match grid");

    const int gx = grid.gx;
    const int gy = grid.gy;
    std::vector<CooEntry> entries;
    entries.reserve(static_cast<std::size_t>(5) * gx * gy);

    // Interior node (m, n) sits at full-grid position (m+1, n+1); the four
    // cells around it are (m..m+1, n..n+1) in cell coordinates.
    for (int n = 0; n < gy; ++n) {
        for (int m = 0; m < gx; ++m) {
            const int row = node_index(m, n, grid);
            const double k_node = (mat.at(m, n) + mat.at(m + 1, n) + mat.at(m, n + 1) +
                                   mat.at(m + 1, n + 1)) /
                                  4.0;
            entries.push_back({row, row, 4.0 * k_node});
            if (m > 0) {
                const double k_edge = (mat.at(m, n) + mat.at(m, n + 1)) / 2.0;
                entries.push_back({row, node_index(m - 1, n, grid), -k_edge});
            }
            if (m + 1 < gx) {
                const double k_edge = (mat.at(m + 1, n) + mat.at(m + 1, n + 1)) / 2.0;
                entries.push_back({row, node_index(m + 1, n, grid), -k_edge});
            }
            if (n > 0) {
                const double k_edge = (mat.at(m, n) + mat.at(m + 1, n)) / 2.0;
                entries.push_back({row, node_index(m, n - 1, grid), -k_edge});
            }
            if (n + 1 < gy) {
                const double k_edge = (mat.at(m, n + 1) + mat.at(m + 1, n + 1)) / 2.0;
                entries.push_back({row, node_index(m, n + 1, grid), -k_edge});
            }
        }
    }
    return SymSparseMatrix::from_coo(gx * gy, entries);
}

DenseVector assemble_rhs(const GridSpec& grid, double f) {
    return assemble_rhs(grid, [f](int, int) { return f; });
}

DenseVector assemble_rhs(const GridSpec& grid, const std::function<double(int, int)>& f) {
    check_grid(grid);
    DenseVector b(static_cast<std::size_t>(grid.gx) * grid.gy);
    const double h2 = grid.h * grid.h;
    for (int n = 0; n < grid.gy; ++n) {
        for (int m = 0; m < grid.gx; ++m) {
            const double v = f(m, n);
            if (!std::isfinite(v)) throw std::invalid_argument("source term is not finite");
            b[node_index(m, n, grid)] = v * h2;
        }
    }
    return b;
}

PoissonProblem assemble_problem(const GridSpec& grid, const MaterialField& mat, double f) {
    PoissonProblem prob{assemble(grid, mat), assemble_rhs(grid, f), grid};

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DenseVector x(prob.b.size()), Kx;
    for (int trial = 0; trial < 20; ++trial) {
        for (auto& v : x) v = dist(rng);
        spmv(prob.K, x, Kx);
        double quad = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) quad += x[i] * Kx[i];
        if (!(quad > 0.0)) throw std::runtime_error("assembled matrix failed the SPD spot check");
    }
    return prob;
}

void write_field_csv(const GridSpec& grid, const DenseVector& u, const std::string& path) {
    if (u.size() != static_cast<std::size_t>(grid.num_nodes()))
        throw std::invalid_argument("field length does not match grid");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "m,n,u\n";
    char buf[64];
    for (int n = 0; n < grid.gy; ++n) {
        for (int m = 0; m < grid.gx; ++m) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", m, n, u[node_index(m, n, grid)]);
            out << buf;
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qspai
