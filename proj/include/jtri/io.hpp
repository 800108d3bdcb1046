#pragma once

#include "jtri/matrix.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace jtri {

/// Reads matrices in the text format
///
///     rows cols
///     re im  re im  ...   (row-major, rows * cols pairs)
///
/// repeated any number of times. `#` starts a comment running to the end of
/// the line. Throws ParseError on malformed input.
std::vector<ComplexMatrix> read_matrices(std::istream& in);
std::vector<ComplexMatrix> read_matrices_from_string(const std::string& text);
std::vector<ComplexMatrix> read_matrices_from_file(const std::string& path);

void write_matrix(std::ostream& out, const ComplexMatrix& m);

} // namespace jtri
