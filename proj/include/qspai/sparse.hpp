#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qspai {

using DenseVector = std::vector<double>;

struct CooEntry {
    int row;
    int col;
    double value;
};

/// Small dense symmetric matrix, row-major. Holds the reduced system
/// extracted from one column's support (s <= 64).
class DenseSmallMatrix {
public:
    explicit DenseSmallMatrix(int s);

    int size() const { return s_; }
    double& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * s_ + c]; }
    double operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * s_ + c]; }
    const std::vector<double>& values() const { return a_; }

    bool is_symmetric() const;
    bool operator==(const DenseSmallMatrix& other) const = default;

private:
    int s_;
    std::vector<double> a_;
};

/// Symmetric sparse matrix in compressed-row form with full (not half)
/// storage. Immutable after construction; construction validates exact
/// structural and numerical symmetry, strictly ascending column indices
/// per row, and drops entries below 1e-300 magnitude.
class SymSparseMatrix {
public:
    /// Builds from coordinate triples. Duplicate (row, col) entries are
    /// summed before validation.
    static SymSparseMatrix from_coo(int n, const std::vector<CooEntry>& entries);

    int n() const { return n_; }
    std::size_t nnz() const { return cols_.size(); }

    std::span<const int> row_cols(int i) const {
        return {cols_.data() + row_ptr_[i], cols_.data() + row_ptr_[i + 1]};
    }
    std::span<const double> row_vals(int i) const {
        return {vals_.data() + row_ptr_[i], vals_.data() + row_ptr_[i + 1]};
    }

    /// Stored value at (i, j), or 0 when the entry is absent.
    double at(int i, int j) const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_index() const { return cols_; }
    const std::vector<double>& values() const { return vals_; }

    bool same_pattern(const SymSparseMatrix& other) const;
    bool operator==(const SymSparseMatrix& other) const = default;

    static SymSparseMatrix identity(int n);

private:
    friend SymSparseMatrix symmetrize(const class SparseAccumulator& raw);
    SymSparseMatrix() = default;

    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> cols_;
    std::vector<double> vals_;
};

/// Mutable CSR-shaped staging area for a matrix under construction.
/// The pattern is fixed up front (usually copied from a SymSparseMatrix);
/// values may be set per entry and are not required to be symmetric
/// until symmetrize() is applied.
class SparseAccumulator {
public:
    /// Copies the pattern of `pattern` with all values zeroed.
    explicit SparseAccumulator(const SymSparseMatrix& pattern);

    /// Builds from coordinate triples (duplicates summed), keeping values
    /// as given. Pattern symmetry is checked by symmetrize(), not here.
    SparseAccumulator(int n, const std::vector<CooEntry>& entries);

    int n() const { return n_; }

    /// Sets the value of an existing entry; throws if (i, j) is not in
    /// the pattern.
    void set(int i, int j, double value);
    double get(int i, int j) const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_index() const { return cols_; }
    const std::vector<double>& values() const { return vals_; }

private:
    friend SymSparseMatrix symmetrize(const SparseAccumulator& raw);

    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> cols_;
    std::vector<double> vals_;
};

/// y = A*x, rows distributed across OpenMP threads. Each output element is
/// a single left-to-right dot product over the stored row, so the result
/// is bitwise identical to spmv_serial.
void spmv(const SymSparseMatrix& A, const DenseVector& x, DenseVector& y);
DenseVector spmv(const SymSparseMatrix& A, const DenseVector& x);

/// Serial reference kept for testing and benchmarking against spmv.
void spmv_serial(const SymSparseMatrix& A, const DenseVector& x, DenseVector& y);
DenseVector spmv_serial(const SymSparseMatrix& A, const DenseVector& x);

/// Strictly ascending row indices with nonzero entries in column j
/// (equal to the row-j support by symmetry). Throws if j is out of range
/// or the diagonal entry is missing.
std::vector<int> column_support(const SymSparseMatrix& A, int j);

/// Dense extraction A[s, s] for a strictly ascending index list s.
DenseSmallMatrix principal_submatrix(const SymSparseMatrix& A, const std::vector<int>& s);

/// M <- (M + M^T)/2 over a raw accumulation whose pattern must be
/// symmetric; throws on pattern asymmetry.
SymSparseMatrix symmetrize(const SparseAccumulator& raw);

}  // namespace qspai
