#include "rmt/exact_rank.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(prod & kPrime) +
                    static_cast<std::uint64_t>(prod >> 61);
  if (r >= kPrime) r -= kPrime;
  return r;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base);
    base = mul_mod(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t to_residue(double v) {
  const auto i = static_cast<std::int64_t>(v);
  const std::int64_t r = i % static_cast<std::int64_t>(kPrime);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(kPrime) : r);
}

void require_integer(const Matrix& m) {
  if (!has_integer_entries(m)) {
    throw ParameterError("exact rank requires integer entries below 2^52");
  }
}

}  // namespace

bool has_integer_entries(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v) || std::nearbyint(v) != v || std::abs(v) >= 0x1.0p52) {
        return false;
      }
    }
  }
  return true;
}

int modular_rank(const Matrix& m) {
  require_integer(m);
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      a[i][j] = to_residue(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));

  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    const std::uint64_t inv = pow_mod(a[rank][c], kPrime - 2);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const std::uint64_t factor = mul_mod(a[i][c], inv);
      for (std::size_t j = c; j < cols; ++j) {
        const std::uint64_t sub = mul_mod(factor, a[rank][j]);
        a[i][j] = a[i][j] >= sub ? a[i][j] - sub : a[i][j] + kPrime - sub;
      }
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

int bareiss_rank(const Matrix& m) {
  require_integer(m);
  using boost::multiprecision::cpp_int;
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  std::vector<std::vector<cpp_int>> a(rows, std::vector<cpp_int>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      a[i][j] = static_cast<std::int64_t>(
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));

  cpp_int previous = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / previous;
      }
      a[i][c] = 0;
    }
    previous = a[rank][c];
    ++rank;
  }
  return static_cast<int>(rank);
}

int exact_rank(const Matrix& m) {
  const int full = static_cast<int>(std::min(m.rows(), m.cols()));
  const int mod = modular_rank(m);
  if (mod == full) return mod;
  return bareiss_rank(m);
}

}  // namespace rmt
