#ifndef RMT_SPECTRAL_HPP_
#define RMT_SPECTRAL_HPP_

#include <limits>
#include <string>

#include "rmt/ensemble.hpp"
#include "rmt/lanczos.hpp"

namespace rmt {


/// s_min <= kSingularRelTol * max(1, s_max) means numerically singular.
inline constexpr double kSingularRelTol = 1e-12;

enum class SpectralMethod { kFullSvd, kIterative };
std::string to_string(SpectralMethod method);

struct SpectralSummary {
  double s_min = 0.0;
  double s_max = 0.0;
  /// s_max / s_min, +inf when s_min = 0.
  double cond = kInfinity;
  SpectralMethod method = SpectralMethod::kFullSvd;
  /// Largest relative eigen-residual ||M^T M v - s^2 v|| / s_max^2 over the
  /// reported singular pairs.
  double residual = 0.0;
  bool singular = false;
};

/// All min(rows, cols) singular values, non-increasing (one-sided Jacobi).
/// Throws DataError on non-finite entries.
Vector full_svd_singular_values(const Matrix& m);

struct SminEstimate {
  double value = 0.0;
  bool singular = false;
  SpectralMethod method = SpectralMethod::kIterative;
  double residual = 0.0;
};

/// Smallest singular value, accurate to tol * s_max.
///
/// Square inputs use Lanczos on (M^T M)^{-1} applied through one partial-pivot
/// LU factorization, falling back to the full Jacobi SVD when the iteration
/// stalls. Non-square inputs always take the full SVD. Numerically singular
/// matrices return value 0 with `singular` set.
SminEstimate smallest_singular_value_estimate(const Matrix& m, double tol = 1e-10);
double smallest_singular_value(const Matrix& m, double tol = 1e-10);

/// Largest singular value by Lanczos on M^T M; zero for the zero matrix.
template <typename MatrixType>
LanczosResult largest_singular_value_estimate(const MatrixType& m, double tol) {
  Eigen::VectorXd tmp(m.rows());
  auto apply = [&](const auto& x, Eigen::VectorXd& y) {
    tmp.noalias() = m * x;
    y.noalias() = m.transpose() * tmp;
  };
  LanczosResult r = lanczos_largest(apply, m.cols(), tol, 4000);
  r.eigenvalue = std::max(r.eigenvalue, 0.0);
  return r;
}

double largest_singular_value(const Matrix& m, double tol = 1e-10);
double largest_singular_value(const SparseMatrix& m, double tol = 1e-10);

/// s_max / s_min, +inf when numerically singular.
double condition_number(const Matrix& m);

/// Full summary by the chosen method.
SpectralSummary spectral_summary(const Matrix& m,
                                 SpectralMethod method = SpectralMethod::kFullSvd,
                                 double tol = 1e-10);

/// Euclidean distance from column j to the span of the other columns,
/// from a rank-revealing QR least-squares residual.
double column_span_distance(const Matrix& m, int j);

/// Distances for every column. For well-conditioned square inputs this uses
/// dist_j = 1 / ||row j of M^{-1}||; otherwise it falls back to QR per column.
Vector column_span_distances(const Matrix& m);

/// max_j ||column j||_2.
double seginer_column_stat(const Matrix& m);
double seginer_column_stat(const SparseMatrix& m);

struct BvhSigmas {
  double sigma1 = 0.0;     // max row l2 norm
  double sigma2 = 0.0;     // max column l2 norm
  double sigma_star = 0.0; // max |entry|
};
BvhSigmas bvh_sigmas(const Matrix& b);

/// Right-hand side of the Bandeira-van Handel bound for the norm,
/// (1 + eps) * (sigma1 + sigma2 + 5 sigma_star sqrt(log n) / sqrt(log(1 + eps))).
double bvh_norm_bound(const BvhSigmas& s, int n, double eps);

}  // namespace rmt

#endif  // RMT_SPECTRAL_HPP_
