#ifndef RMT_LANCZOS_HPP_
#define RMT_LANCZOS_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "rmt/random.hpp"

namespace rmt {

struct LanczosResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
  /// ||B y - theta y|| for the returned Ritz pair.
  double residual = 0.0;
  int matvecs = 0;
  bool converged = false;
};

/// Largest eigenvalue of a symmetric positive semidefinite operator by
/// restarted Lanczos with full reorthogonalization.
///
/// `apply(x, y)` must set y = B x. Iteration stops once the Ritz residual
/// satisfies ||B y - theta y|| <= rel_tol * theta; for symmetric B some
/// eigenvalue then lies within that distance of theta.
template <typename Apply>
LanczosResult lanczos_largest(Apply&& apply, Eigen::Index n, double rel_tol,
                              int max_matvecs = 2000, int basis_size = 64) {
  LanczosResult out;
  if (n == 0) return out;
  const Eigen::Index kmax = std::min<Eigen::Index>(basis_size, n);

  // Fixed pseudo-random start vector so results are reproducible.
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto b = philox4x32({static_cast<std::uint32_t>(i), 0u, 0u, 0u},
                              {0x5EED1A2Cu, 0x0000C205u});
    start[i] = to_unit_closed_open(b[0], b[1]) - 0.5;
  }
  start.normalize();

  Eigen::MatrixXd basis(n, kmax);
  Eigen::VectorXd w(n);
  Eigen::VectorXd alpha(kmax), beta(kmax);
  while (out.matvecs < max_matvecs) {
    basis.col(0) = start;
    Eigen::Index k = 0;
    double theta = 0.0;
    Eigen::VectorXd ritz_coeffs;
    double residual = 0.0;
    bool invariant = false;
    for (; k < kmax; ++k) {
      apply(basis.col(k), w);
      ++out.matvecs;
      alpha[k] = basis.col(k).dot(w);
      w -= alpha[k] * basis.col(k);
      if (k > 0) w -= beta[k - 1] * basis.col(k - 1);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd overlap = basis.leftCols(k + 1).transpose() * w;
        w -= basis.leftCols(k + 1) * overlap;
      }
      beta[k] = w.norm();

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      Eigen::VectorXd diag = alpha.head(k + 1);
      Eigen::VectorXd sub = beta.head(k);
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      theta = tri.eigenvalues()[k];
      ritz_coeffs = tri.eigenvectors().col(k);
      residual = beta[k] * std::abs(ritz_coeffs[k]);

      const double scale = std::max(std::abs(theta), alpha.head(k + 1).cwiseAbs().maxCoeff());
      invariant = beta[k] <= 1e-14 * std::max(scale, 1e-300);
      if (invariant || residual <= rel_tol * std::abs(theta) || theta == 0.0 ||
          out.matvecs >= max_matvecs) {
        ++k;
        break;
      }
      if (k + 1 < kmax) basis.col(k + 1) = w / beta[k];
    }
    const Eigen::Index used = std::min<Eigen::Index>(k, kmax);
    out.eigenvalue = theta;
    out.eigenvector = basis.leftCols(used) * ritz_coeffs.head(used);
    out.eigenvector.normalize();
    out.residual = residual;
    if (invariant || residual <= rel_tol * std::abs(theta) || theta == 0.0) {
      out.converged = true;
      return out;
    }
    start = out.eigenvector;
  }
  return out;
}

}  // namespace rmt

#endif  // RMT_LANCZOS_HPP_
