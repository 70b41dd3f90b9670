#ifndef RMT_MATRIX_IO_HPP_
#define RMT_MATRIX_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rmt/ensemble.hpp"

namespace rmt {

inline constexpr const char* kMatrixHeader =
    "%%MatrixMarket matrix coordinate real general";

/// Coordinate text format: header line, "rows cols nnz", then one
/// "i j value" line per nonzero with 1-based indices and 17 significant
/// digits. Only nonzero entries are written.
void write_matrix(std::ostream& os, const Matrix& m);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

/// Accepts any '%' comment lines and arbitrary whitespace. Errors carry the
/// offending line number. Repeated coordinates are summed.
Matrix read_matrix(std::istream& is);
Matrix read_matrix(const std::filesystem::path& path);

/// One value per line, 17 significant digits.
void write_vector(std::ostream& os, const Vector& v);
Vector read_vector(std::istream& is);
Vector read_vector(const std::filesystem::path& path);

/// "%.17g" rendering used by every text artifact.
std::string format_double(double v);

}  // namespace rmt

#endif  // RMT_MATRIX_IO_HPP_
