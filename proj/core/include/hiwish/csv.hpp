#ifndef HIWISH_CSV_HPP
#define HIWISH_CSV_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hiwish/matrix.hpp"

namespace hiwish::csv {

// Decimal form with enough digits to round-trip the exact double.
std::string format_double(double v);

void write_matrix(std::ostream &out, const Matrix &m);
void write_matrix_file(const std::filesystem::path &path, const Matrix &m);

// Rectangular numeric CSV with no header; every row must have the same
// number of cells.  ParseError carries the 1-based row and column of the
// offending cell.
Matrix read_matrix(std::istream &in);

// A full p x p matrix expected to be symmetric within 1e-9 and positive
// definite; off-diagonal pairs are averaged on construction.
SpdMatrix read_spd_matrix_file(const std::filesystem::path &path);

// Observation rows, one per line, no header; n >= 1 rows of p columns.
Matrix read_data_file(const std::filesystem::path &path);

}  // namespace hiwish::csv

#endif  // HIWISH_CSV_HPP
