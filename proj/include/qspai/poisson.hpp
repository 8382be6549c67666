#pragma once

#include <functional>
#include <string>

#include "qspai/sparse.hpp"

namespace qspai {

/// Interior grid of a rectangular domain with zero Dirichlet boundaries.
/// gx-by-gy unknowns, spacing h; the surrounding boundary ring is
/// eliminated from the assembled system.
struct GridSpec {
    int gx = 1;
    int gy = 1;
    double h = 1.0;

    int num_nodes() const { return gx * gy; }
};

/// Per-element conductivity on the (gx+1) x (gy+1) cell grid, boundary
/// ring included. Cell (cx, cy) spans full-grid nodes [cx, cx+1] x
/// [cy, cy+1].
class MaterialField {
public:
    MaterialField(const GridSpec& grid, double fill);

    int cells_x() const { return cx_; }
    int cells_y() const { return cy_; }
    double& at(int cx, int cy) { return k_[static_cast<std::size_t>(cy) * cx_ + cx]; }
    double at(int cx, int cy) const { return k_[static_cast<std::size_t>(cy) * cx_ + cx]; }

private:
    int cx_;
    int cy_;
    std::vector<double> k_;
};

struct PoissonProblem {
    SymSparseMatrix K;
    DenseVector b;
    GridSpec grid;
};

/// Row-major, x-fastest node numbering: (m, n) -> n*gx + m. This ordering
/// is a contract; family counts and all exports depend on it.
int node_index(int m, int n, const GridSpec& grid);

MaterialField material_uniform(const GridSpec& grid, double k);

/// Two materials split at the element-grid midpoint: cell columns below
/// ceil((gx+1)/2) get k1, the rest k2 (odd counts put the extra column
/// on the left).
MaterialField material_vertical_split(const GridSpec& grid, double k1, double k2);

/// Five-point stencil with element-averaged coefficients: diagonal
/// 4*k_node (mean of the 4 cells touching the node), off-diagonal
/// -k_edge (mean of the 2 cells flanking the edge) to each interior
/// neighbor. Boundary neighbors are eliminated.
SymSparseMatrix assemble(const GridSpec& grid, const MaterialField& mat);

DenseVector assemble_rhs(const GridSpec& grid, double f);
DenseVector assemble_rhs(const GridSpec& grid, const std::function<double(int, int)>& f);

/// Assembles matrix and right-hand side, then spot-checks positive
/// definiteness with 20 seeded random vectors.
PoissonProblem assemble_problem(const GridSpec& grid, const MaterialField& mat, double f);

/// CSV export "m,n,u" of a solution field in node_index order.
void write_field_csv(const GridSpec& grid, const DenseVector& u, const std::string& path);

}  // namespace qspai
