#include "qspai/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qspai {

void write_matrix_market(const SymSparseMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");

    std::size_t lower_nnz = 0;
    for (int i = 0; i < A.n(); ++i)
        for (const int j : A.row_cols(i))
            if (j <= i) ++lower_nnz;

    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << A.n() << " " << A.n() << " " << lower_nnz << "\n";
    char buf[64];
    for (int i = 0; i < A.n(); ++i) {
        const auto cols = A.row_cols(i);
        const auto vals = A.row_vals(i);
        for (std::size_t p = 0; p < cols.size(); ++p) {
            if (cols[p] > i) break;
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1, cols[p] + 1, vals[p]);
            out << buf;
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

SymSparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty file: " + path);
    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    std::transform(symmetry.begin(), symmetry.end(), symmetry.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
        throw std::runtime_error("not a Matrix Market coordinate file: " + path);
    if (field != "real" || (symmetry != "symmetric" && symmetry != "general"))
        throw std::runtime_error("unsupported Matrix Market variant: " + header);
    const bool mirror = symmetry == "symmetric";

    std::string line;
    int rows = 0, cols = 0;
    long long nnz = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> nnz)) throw std::runtime_error("bad size line: " + line);
        break;
    }
    if (rows != cols) throw std::runtime_error("matrix is not square: " + path);

    std::vector<CooEntry> entries;
    entries.reserve(static_cast<std::size_t>(mirror ? 2 * nnz : nnz));
    long long seen = 0;
    while (seen < nnz && std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        int i = 0, j = 0;
        double v = 0.0;
        if (!(ls >> i >> j >> v)) throw std::runtime_error("bad entry line: " + line);
        entries.push_back({i - 1, j - 1, v});
        if (mirror && i != j) entries.push_back({j - 1, i - 1, v});
        ++seen;
    }
    if (seen != nnz) throw std::runtime_error("truncated Matrix Market file: " + path);
    return SymSparseMatrix::from_coo(rows, entries);
}

}  // namespace qspai
