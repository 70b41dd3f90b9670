#ifndef RMT_JACOBI_SVD_HPP_
#define RMT_JACOBI_SVD_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace rmt {

template <typename Scalar>
struct JacobiSvdResult {
  /// Non-increasing, length min(rows, cols).
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> singular_values;
  /// Right singular vectors as columns (of the input, not of its transpose),
  /// ordered like singular_values. Empty unless requested.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> right_vectors;
  int sweeps = 0;
  bool converged = false;
};

/// One-sided (Hestenes) Jacobi SVD.
///
/// Orthogonalizes the columns of the working copy by plane rotations until
/// every pair is orthogonal to working precision; the column norms are then
/// the singular values. Wide inputs are processed through their transpose.
/// Tiny singular values come out with small relative error, which is why this
/// is the reference path for s_min.
template <typename Derived>
JacobiSvdResult<typename Derived::Scalar> jacobi_svd(
    const Eigen::MatrixBase<Derived>& input, bool compute_right_vectors = false,
    int max_sweeps = 80) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const bool wide = input.rows() < input.cols();
  // Column-major working copy with at least as many rows as columns.
  Mat work = wide ? Mat(input.transpose()) : Mat(input);
  const Eigen::Index m = work.rows();
  const Eigen::Index n = work.cols();
  // Rotations applied to columns of `work` accumulate into `v`; for a wide
  // input the right vectors of the input are instead the normalized columns
  // of the rotated transpose.
  const bool track_v = compute_right_vectors && !wide;
  Mat v = track_v ? Mat::Identity(n, n) : Mat();

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tiny = std::numeric_limits<Scalar>::min();
  JacobiSvdResult<Scalar> result;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar alpha = work.col(p).squaredNorm();
        const Scalar beta = work.col(q).squaredNorm();
        const Scalar gamma = work.col(p).dot(work.col(q));
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) ||
            std::abs(gamma) <= tiny) {
          continue;
        }
        rotated = true;
        const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
        const Scalar t = (zeta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(zeta) + std::sqrt(Scalar(1) + zeta * zeta));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = c * t;
        for (Eigen::Index i = 0; i < m; ++i) {
          const Scalar up = work(i, p);
          const Scalar uq = work(i, q);
          work(i, p) = c * up - s * uq;
          work(i, q) = s * up + c * uq;
        }
        if (track_v) {
          for (Eigen::Index i = 0; i < n; ++i) {
            const Scalar vp = v(i, p);
            const Scalar vq = v(i, q);
            v(i, p) = c * vp - s * vq;
            v(i, q) = s * vp + c * vq;
          }
        }
      }
    }
    result.sweeps = sweep + 1;
    if (!rotated) {
      result.converged = true;
      break;
    }
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> norms(n);
  for (Eigen::Index k = 0; k < n; ++k) norms[k] = work.col(k).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return norms[a] > norms[b]; });

  result.singular_values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) result.singular_values[k] = norms[order[k]];

  if (compute_right_vectors) {
    if (!wide) {
      result.right_vectors.resize(n, n);
      for (Eigen::Index k = 0; k < n; ++k) result.right_vectors.col(k) = v.col(order[k]);
    } else {
      // Input is A = W^T with W = work * V^T after rotation, so the left
      // vectors of W (normalized columns of work) are right vectors of A.
      result.right_vectors.resize(m, n);
      for (Eigen::Index k = 0; k < n; ++k) {
        const Scalar s = norms[order[k]];
        if (s > 0) {
          result.right_vectors.col(k) = work.col(order[k]) / s;
        } else {
          result.right_vectors.col(k).setZero();
        }
      }
    }
  }
  return result;
}

}  // namespace rmt

#endif  // RMT_JACOBI_SVD_HPP_
