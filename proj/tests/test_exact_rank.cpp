#include <doctest.h>

#include <Eigen/LU>

#include "rmt/ensemble.hpp"
#include "rmt/errors.hpp"
#include "rmt/exact_rank.hpp"

using namespace rmt;

TEST_CASE("exact rank of small integer matrices") {
  CHECK(exact_rank(Matrix::Identity(4, 4)) == 4);
  CHECK(exact_rank(Matrix::Ones(3, 3)) == 1);
  CHECK(exact_rank(Matrix::Zero(3, 2)) == 0);
  Matrix m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  CHECK(exact_rank(m) == 2);
  CHECK(exactly_singular(m));
  CHECK_FALSE(exactly_singular(Matrix::Identity(3, 3)));

  Matrix frac = Matrix::Identity(2, 2);
  frac(0, 1) = 0.5;
  CHECK_FALSE(has_integer_entries(frac));
  CHECK_THROWS_AS(exact_rank(frac), ParameterError);
}

TEST_CASE("modular, Bareiss, and floating rank agree on low-rank products") {
  EnsembleSpec e;
  e.dist = Rademacher{};
  for (std::uint32_t t = 0; t < 40; ++t) {
    const int n = 6 + static_cast<int>(t % 5);
    const int k = 1 + static_cast<int>(t % static_cast<std::uint32_t>(n));
    e.n = n;
    const Matrix a = sample_matrix(e, {1, t}).leftCols(k);
    const Matrix b = sample_matrix(e, {2, t}).topRows(k);
    const Matrix m = a * b;  // integer, rank <= k
    const int expected = static_cast<int>(Eigen::MatrixXd(m).fullPivLu().rank());
    CHECK(bareiss_rank(m) == expected);
    CHECK(exact_rank(m) == expected);
    CHECK(modular_rank(m) <= expected);
  }
}

TEST_CASE("Bareiss handles entries whose minors overflow 64 bits") {
  // Hadamard-type +-1 matrices of order 64 have determinant 64^32 = 2^192.
  Matrix h(1, 1);
  h << 1;
  while (h.rows() < 64) {
    Matrix next(2 * h.rows(), 2 * h.rows());
    next << h, h, h, -h;
    h = next;
  }
  CHECK(bareiss_rank(h) == 64);
  Matrix dup = h;
  dup.row(63) = dup.row(0);
  CHECK(bareiss_rank(dup) == 63);
  CHECK(exact_rank(dup) == 63);
}
