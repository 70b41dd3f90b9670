#include "rmt/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

[[noreturn]] void parse_error(long line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

// Next non-comment, non-blank line; false at end of input.
bool next_content_line(std::istream& is, std::string& line, long& number) {
  while (std::getline(is, line)) {
    ++number;
    if (is_blank(line)) continue;
    const auto first = line.find_first_not_of(" \t");
    if (line[first] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& os, const Matrix& m) {
  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) nnz += m(i, j) != 0.0;
  os << kMatrixHeader << '\n' << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      os << i + 1 << ' ' << j + 1 << ' ' << format_double(m(i, j)) << '\n';
    }
  }
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_matrix(os, m);
  if (!os) throw IoError("write failed: " + path.string());
}

Matrix read_matrix(std::istream& is) {
  std::string line;
  long number = 0;
  if (!next_content_line(is, line, number)) parse_error(number, "missing size line");
  long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> rows >> cols >> nnz) || (ss >> extra)) {
      parse_error(number, "expected 'rows cols nnz'");
    }
    if (rows < 0 || cols < 0 || nnz < 0) parse_error(number, "negative size");
  }
  Matrix m = Matrix::Zero(rows, cols);
  for (long k = 0; k < nnz; ++k) {
    if (!next_content_line(is, line, number)) {
      parse_error(number, "expected " + std::to_string(nnz) + " entries, found " +
                              std::to_string(k));
    }
    std::istringstream ss(line);
    long i = 0, j = 0;
    double v = 0.0;
    std::string extra;
    if (!(ss >> i >> j >> v) || (ss >> extra)) parse_error(number, "expected 'i j value'");
    if (i < 1 || i > rows || j < 1 || j > cols) parse_error(number, "index out of range");
    if (!std::isfinite(v)) parse_error(number, "non-finite value");
    m(i - 1, j - 1) += v;
  }
  if (next_content_line(is, line, number)) parse_error(number, "trailing data after entries");
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_matrix(is);
}

void write_vector(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << format_double(v[i]) << '\n';
}

Vector read_vector(std::istream& is) {
  std::vector<double> values;
  std::string line;
  long number = 0;
  while (next_content_line(is, line, number)) {
    std::istringstream ss(line);
    double v = 0.0;
    std::string extra;
    if (!(ss >> v) || (ss >> extra)) parse_error(number, "expected one value");
    if (!std::isfinite(v)) parse_error(number, "non-finite value");
    values.push_back(v);
  }
  if (values.empty()) throw DataError("empty vector file");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector read_vector(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_vector(is);
}

}  // namespace rmt
