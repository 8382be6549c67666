#include "qspai/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qspai {

namespace {

constexpr double kDropTol = 1e-300;

struct CsrArrays {
    std::vector<int> row_ptr;
    std::vector<int> cols;
    std::vector<double> vals;
};

// Sorts COO triples, sums duplicates, drops near-zero values.
CsrArrays compress(int n, std::vector<CooEntry> entries) {
    if (n <= 0) throw std::invalid_argument("matrix dimension must be positive");
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
            throw std::invalid_argument("coo entry index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const CooEntry& a, const CooEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrArrays out;
    out.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    std::size_t i = 0;
    while (i < entries.size()) {
        const int r = entries[i].row;
        const int c = entries[i].col;
        double v = entries[i].value;
        ++i;
        while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
            v += entries[i].value;
            ++i;
        }
        if (std::abs(v) < kDropTol) continue;
        out.cols.push_back(c);
        out.vals.push_back(v);
        ++out.row_ptr[static_cast<std::size_t>(r) + 1];
    }
    for (int r = 0; r < n; ++r) out.row_ptr[r + 1] += out.row_ptr[r];
    return out;
}

double lookup(const std::vector<int>& row_ptr, const std::vector<int>& cols,
              const std::vector<double>& vals, int i, int j, bool* found = nullptr) {
    const auto begin = cols.begin() + row_ptr[i];
    const auto end = cols.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it != end && *it == j) {
        if (found) *found = true;
        return vals[static_cast<std::size_t>(it - cols.begin())];
    }
    if (found) *found = false;
    return 0.0;
}

}  // namespace

DenseSmallMatrix::DenseSmallMatrix(int s) : s_(s) {
    if (s <= 0 || s > 64) throw std::invalid_argument("dense small matrix size must be in [1, 64]");
    a_.assign(static_cast<std::size_t>(s) * s, 0.0);
}

bool DenseSmallMatrix::is_symmetric() const {
    for (int r = 0; r < s_; ++r)
        for (int c = r + 1; c < s_; ++c)
            if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
}

SymSparseMatrix SymSparseMatrix::from_coo(int n, const std::vector<CooEntry>& entries) {
    CsrArrays csr = compress(n, entries);
    // Exact symmetry: every (i, j) entry must have a (j, i) twin equal to
    // the last bit.
    for (int i = 0; i < n; ++i) {
        for (int p = csr.row_ptr[i]; p < csr.row_ptr[i + 1]; ++p) {
            const int j = csr.cols[p];
            if (j == i) continue;
            bool found = false;
            const double tv = lookup(csr.row_ptr, csr.cols, csr.vals, j, i, &found);
            if (!found || tv != csr.vals[p])
                throw std::invalid_argument("matrix is not symmetric at (" + std::to_string(i) +
                                            ", " + std::to_string(j) + ")");
        }
    }
    SymSparseMatrix A;
    A.n_ = n;
    A.row_ptr_ = std::move(csr.row_ptr);
    A.cols_ = std::move(csr.cols);
    A.vals_ = std::move(csr.vals);
    return A;
}

double SymSparseMatrix::at(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("index out of range");
    return lookup(row_ptr_, cols_, vals_, i, j);
}

bool SymSparseMatrix::same_pattern(const SymSparseMatrix& other) const {
    return n_ == other.n_ && row_ptr_ == other.row_ptr_ && cols_ == other.cols_;
}

SymSparseMatrix SymSparseMatrix::identity(int n) {
    std::vector<CooEntry> entries;
    entries.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    return from_coo(n, entries);
}

SparseAccumulator::SparseAccumulator(const SymSparseMatrix& pattern)
    : n_(pattern.n()),
      row_ptr_(pattern.row_ptr()),
      cols_(pattern.col_index()),
      vals_(pattern.nnz(), 0.0) {}

SparseAccumulator::SparseAccumulator(int n, const std::vector<CooEntry>& entries) {
    CsrArrays csr = compress(n, entries);
    n_ = n;
    row_ptr_ = std::move(csr.row_ptr);
    cols_ = std::move(csr.cols);
    vals_ = std::move(csr.vals);
}

void SparseAccumulator::set(int i, int j, double value) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("index out of range");
    const auto begin = cols_.begin() + row_ptr_[i];
    const auto end = cols_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j)
        throw std::invalid_argument("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") is not in the pattern");
    vals_[static_cast<std::size_t>(it - cols_.begin())] = value;
}

double SparseAccumulator::get(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("index out of range");
    return lookup(row_ptr_, cols_, vals_, i, j);
}

void spmv(const SymSparseMatrix& A, const DenseVector& x, DenseVector& y) {
    if (static_cast<int>(x.size()) != A.n())
        throw std::invalid_argument("spmv: dimension mismatch");
    y.resize(x.size());
    const int n = A.n();
    const auto& row_ptr = A.row_ptr();
    const auto& cols = A.col_index();
    const auto& vals = A.values();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) sum += vals[p] * x[cols[p]];
        y[i] = sum;
    }
}

DenseVector spmv(const SymSparseMatrix& A, const DenseVector& x) {
    DenseVector y;
    spmv(A, x, y);
    return y;
}

void spmv_serial(const SymSparseMatrix& A, const DenseVector& x, DenseVector& y) {
    if (static_cast<int>(x.size()) != A.n())
        throw std::invalid_argument("spmv: dimension mismatch");
    y.resize(x.size());
    const int n = A.n();
    const auto& row_ptr = A.row_ptr();
    const auto& cols = A.col_index();
    const auto& vals = A.values();
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) sum += vals[p] * x[cols[p]];
        y[i] = sum;
    }
}

DenseVector spmv_serial(const SymSparseMatrix& A, const DenseVector& x) {
    DenseVector y;
    spmv_serial(A, x, y);
    return y;
}

std::vector<int> column_support(const SymSparseMatrix& A, int j) {
    if (j < 0 || j >= A.n()) throw std::out_of_range("column index out of range");
    const auto cols = A.row_cols(j);
    std::vector<int> support(cols.begin(), cols.end());
    if (!std::binary_search(support.begin(), support.end(), j))
        throw std::invalid_argument("column " + std::to_string(j) +
                                    " has no diagonal entry (matrix not SPD)");
    return support;
}

DenseSmallMatrix principal_submatrix(const SymSparseMatrix& A, const std::vector<int>& s) {
    const int m = static_cast<int>(s.size());
    if (m == 0) throw std::invalid_argument("empty index list");
    for (int a = 0; a < m; ++a) {
        if (s[a] < 0 || s[a] >= A.n()) throw std::out_of_range("submatrix index out of range");
        if (a > 0 && s[a] <= s[a - 1])
            throw std::invalid_argument("submatrix indices must be strictly ascending");
    }
    DenseSmallMatrix out(m);
    for (int a = 0; a < m; ++a) {
        const auto cols = A.row_cols(s[a]);
        const auto vals = A.row_vals(s[a]);
        // Both cols and s are sorted; merge.
        std::size_t p = 0;
        for (int b = 0; b < m; ++b) {
            while (p < cols.size() && cols[p] < s[b]) ++p;
            if (p < cols.size() && cols[p] == s[b]) out(a, b) = vals[p];
        }
    }
    return out;
}

SymSparseMatrix symmetrize(const SparseAccumulator& raw) {
    const int n = raw.n();
    const auto& row_ptr = raw.row_ptr();
    const auto& cols = raw.cols_;
    const auto& vals = raw.vals_;

    std::vector<CooEntry> averaged;
    averaged.reserve(vals.size());
    for (int i = 0; i < n; ++i) {
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            const int j = cols[p];
            if (j == i) {
                averaged.push_back({i, i, vals[p]});
                continue;
            }
            const auto begin = cols.begin() + row_ptr[j];
            const auto end = cols.begin() + row_ptr[j + 1];
            const auto it = std::lower_bound(begin, end, i);
            if (it == end || *it != i)
                throw std::invalid_argument("asymmetric pattern at (" + std::to_string(i) + ", " +
                                            std::to_string(j) + ")");
            if (j < i) continue;  // handled from the upper twin
            const std::size_t q = static_cast<std::size_t>(it - cols.begin());
            const double mean = (vals[p] + vals[q]) / 2.0;
            averaged.push_back({i, j, mean});
            averaged.push_back({j, i, mean});
        }
    }
    return SymSparseMatrix::from_coo(n, averaged);
}

}  // namespace qspai
