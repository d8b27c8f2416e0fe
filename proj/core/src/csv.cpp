#include "hiwish/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace hiwish::csv {

namespace {

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string &cell, std::size_t row, std::size_t col) {
  const std::string t = trim(cell);
  if (t.empty()) {
    throw ParseError("empty cell at row " + std::to_string(row) + ", column " +
                     std::to_string(col));
  }
  errno = 0;
  char *end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw ParseError("bad numeric cell '" + t + "' at row " +
                     std::to_string(row) + ", column " + std::to_string(col));
  }
  return v;
}

std::vector<std::vector<double>> read_rows(std::istream &in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(cells, cell, ',')) {
      ++col;
      row.push_back(parse_cell(cell, lineno, col));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged row " + std::to_string(lineno) + ": expected " +
                       std::to_string(rows.front().size()) + " cells, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read failure");
  if (rows.empty()) throw ParseError("no data rows");
  return rows;
}

Matrix to_matrix(const std::vector<std::vector<double>> &rows) {
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::ifstream open_input(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  // 17 significant digits round-trip any double.
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream &out, const Matrix &m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::filesystem::path &path, const Matrix &m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_matrix(out, m);
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

Matrix read_matrix(std::istream &in) { return to_matrix(read_rows(in)); }

SpdMatrix read_spd_matrix_file(const std::filesystem::path &path) {
  auto in = open_input(path);
  const Matrix m = read_matrix(in);
  if (!m.is_square()) {
    throw ParseError("matrix file " + path.string() + " is " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     ", expected square");
  }
  return SpdMatrix(m);
}

Matrix read_data_file(const std::filesystem::path &path) {
  auto in = open_input(path);
  return read_matrix(in);
}

}  // namespace hiwish::csv
