#pragma once

#include <string>

#include "qspai/sparse.hpp"

namespace qspai {

/// Writes A in Matrix Market coordinate format ("coordinate real
/// symmetric", 1-based, lower triangle stored) with full 17-digit
/// precision so a round trip is value-exact.
void write_matrix_market(const SymSparseMatrix& A, const std::string& path);

/// Reads a coordinate-format file. Accepts both "general" and
/// "symmetric" qualifiers; general input must actually be symmetric.
SymSparseMatrix read_matrix_market(const std::string& path);

}  // namespace qspai
