// Matrix Market exchange format: real general/symmetric matrices in array or
// coordinate layout.  Coordinate files are densified on load; values are
// written with 17 significant digits so a write/read cycle is exact.
#pragma once

#include <filesystem>
#include <iosfwd>

#include "scholqr/matcore.hpp"

namespace scholqr {

enum class MmLayout { Array, Coordinate };

/// Throws IoError, ParseError (with line number) or UnsupportedField.
DenseMatrix read_matrix_market(const std::filesystem::path& path);
DenseMatrix read_matrix_market(std::istream& in);

void write_matrix_market(const DenseMatrix& x, const std::filesystem::path& path,
                         MmLayout layout = MmLayout::Array);
void write_matrix_market(const DenseMatrix& x, std::ostream& out,
                         MmLayout layout = MmLayout::Array);

}  // namespace scholqr
