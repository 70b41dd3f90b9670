#include "rmt/spectral.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

#include "rmt/errors.hpp"
#include "rmt/jacobi_svd.hpp"

namespace rmt {

namespace {

void require_finite(const Matrix& m, const char* where) {
  if (!m.allFinite()) throw DataError(std::string(where) + ": non-finite entries");
}

// Relative eigen-residual of (s^2, v) for M^T M, scaled by s_max^2.
double gram_residual(const Matrix& m, const Vector& v, double s, double s_max) {
  if (s_max == 0.0 || v.size() == 0) return 0.0;
  const Vector mv = m * v;
  const Vector r = m.transpose() * mv - s * s * v;
  return r.norm() / (s_max * s_max);
}

bool numerically_singular(double s_min, double s_max) {
  return s_min <= kSingularRelTol * std::max(1.0, s_max);
}

SminEstimate smin_full_svd(const Matrix& m) {
  const auto svd = jacobi_svd(m, true);
  SminEstimate est;
  est.method = SpectralMethod::kFullSvd;
  const Eigen::Index k = svd.singular_values.size();
  if (k == 0) return est;
  const double s_max = svd.singular_values[0];
  const double s_min = svd.singular_values[k - 1];
  est.residual = gram_residual(m, svd.right_vectors.col(k - 1), s_min, s_max);
  est.singular = numerically_singular(s_min, s_max);
  est.value = est.singular ? 0.0 : s_min;
  return est;
}

}  // namespace

std::string to_string(SpectralMethod method) {
  return method == SpectralMethod::kFullSvd ? "full_svd" : "iterative";
}

Vector full_svd_singular_values(const Matrix& m) {
  require_finite(m, "full_svd_singular_values");
  auto svd = jacobi_svd(m, false);
  if (!svd.converged) throw ConvergenceError("jacobi svd did not converge");
  return svd.singular_values;
}

SminEstimate smallest_singular_value_estimate(const Matrix& m, double tol) {
  require_finite(m, "smallest_singular_value");
  if (m.size() == 0) return {};
  if (m.rows() != m.cols()) return smin_full_svd(m);

  const double s_max = largest_singular_value(m, 1e-12);
  if (s_max == 0.0) return {0.0, true, SpectralMethod::kIterative, 0.0};

  const Eigen::PartialPivLU<Matrix> lu(m);
  const Vector u_diag = lu.matrixLU().diagonal();
  if ((u_diag.array() == 0.0).any()) {
    return {0.0, true, SpectralMethod::kIterative, 0.0};
  }

  // Largest eigenvalue of M^{-1} M^{-T} is 1 / s_min^2.
  Vector tmp(m.rows());
  bool finite = true;
  auto apply = [&](const auto& x, Vector& y) {
    tmp = lu.transpose().solve(Vector(x));
    y = lu.solve(tmp);
    finite = finite && y.allFinite();
  };
  // |d s| <= tol * s_max  <=  relative eigenvalue error <= 2 tol s_max / s.
  // s is unknown up front; s <= s_max makes 2 tol a safe target.
  const double rel = std::clamp(2.0 * tol, 1e-14, 1e-3);
  const LanczosResult r = lanczos_largest(apply, m.cols(), rel, 500 * 4);
  if (!finite || !std::isfinite(r.eigenvalue)) {
    return {0.0, true, SpectralMethod::kIterative, 0.0};
  }
  if (!r.converged || r.eigenvalue <= 0.0) return smin_full_svd(m);

  const double s_min = 1.0 / std::sqrt(r.eigenvalue);
  SminEstimate est;
  est.method = SpectralMethod::kIterative;
  est.singular = numerically_singular(s_min, s_max);
  est.value = est.singular ? 0.0 : s_min;
  est.residual = gram_residual(m, r.eigenvector, s_min, s_max);
  return est;
}

double smallest_singular_value(const Matrix& m, double tol) {
  return smallest_singular_value_estimate(m, tol).value;
}

double largest_singular_value(const Matrix& m, double tol) {
  require_finite(m, "largest_singular_value");
  if (m.size() == 0) return 0.0;
  return std::sqrt(largest_singular_value_estimate(m, tol).eigenvalue);
}

double largest_singular_value(const SparseMatrix& m, double tol) {
  if (m.nonZeros() == 0) return 0.0;
  return std::sqrt(largest_singular_value_estimate(m, tol).eigenvalue);
}

double condition_number(const Matrix& m) {
  const SpectralSummary s = spectral_summary(m, SpectralMethod::kIterative);
  return s.cond;
}

SpectralSummary spectral_summary(const Matrix& m, SpectralMethod method,
                                 double tol) {
  require_finite(m, "spectral_summary");
  SpectralSummary out;
  out.method = method;
  if (m.size() == 0) return out;
  if (method == SpectralMethod::kFullSvd) {
    const auto svd = jacobi_svd(m, true);
    if (!svd.converged) throw ConvergenceError("jacobi svd did not converge");
    const Eigen::Index k = svd.singular_values.size();
    out.s_max = svd.singular_values[0];
    out.s_min = svd.singular_values[k - 1];
    out.residual = std::max(
        gram_residual(m, svd.right_vectors.col(0), out.s_max, out.s_max),
        gram_residual(m, svd.right_vectors.col(k - 1), out.s_min, out.s_max));
  } else {
    const LanczosResult top = largest_singular_value_estimate(m, tol);
    out.s_max = std::sqrt(top.eigenvalue);
    const SminEstimate low = smallest_singular_value_estimate(m, tol);
    out.s_min = low.value;
    out.method = low.method;
    out.residual = std::max(
        out.s_max > 0 ? top.residual / (out.s_max * out.s_max) : 0.0, low.residual);
  }
  out.singular = numerically_singular(out.s_min, out.s_max);
  if (out.singular) out.s_min = 0.0;
  out.cond = out.singular ? kInfinity : out.s_max / out.s_min;
  return out;
}

double column_span_distance(const Matrix& m, int j) {
  require_finite(m, "column_span_distance");
  if (j < 0 || j >= m.cols()) throw ParameterError("column_span_distance: bad column");
  const Vector target = m.col(j);
  if (m.cols() == 1) return target.norm();
  Eigen::MatrixXd others(m.rows(), m.cols() - 1);
  others << m.leftCols(j), m.rightCols(m.cols() - j - 1);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
  qr.setThreshold(1e-13);
  const Eigen::Index rank = qr.rank();
  const Vector rotated = qr.householderQ().adjoint() * target;
  const double dist = rotated.tail(rotated.size() - rank).norm();
  return dist <= 1e-10 * m.norm() ? 0.0 : dist;
}

Vector column_span_distances(const Matrix& m) {
  require_finite(m, "column_span_distances");
  const Eigen::Index n = m.cols();
  Vector out(n);
  if (m.rows() == n && n >= 2) {
    const SminEstimate low = smallest_singular_value_estimate(m, 1e-8);
    const double s_max = largest_singular_value(m, 1e-8);
    // 1 / ||row j of M^{-1}|| loses about cond * eps relative accuracy.
    if (!low.singular && s_max / low.value < 1e8) {
      const Matrix inv = m.partialPivLu().inverse();
      for (Eigen::Index j = 0; j < n; ++j) out[j] = 1.0 / inv.row(j).norm();
      return out;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) out[j] = column_span_distance(m, static_cast<int>(j));
  return out;
}

double seginer_column_stat(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.colwise().norm().maxCoeff();
}

double seginer_column_stat(const SparseMatrix& m) {
  Vector sq = Vector::Zero(m.cols());
  for (Eigen::Index i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) sq[it.col()] += it.value() * it.value();
  }
  return sq.size() ? std::sqrt(sq.maxCoeff()) : 0.0;
}

BvhSigmas bvh_sigmas(const Matrix& b) {
  if (b.size() == 0) return {};
  return {b.rowwise().norm().maxCoeff(), b.colwise().norm().maxCoeff(),
          b.cwiseAbs().maxCoeff()};
}

double bvh_norm_bound(const BvhSigmas& s, int n, double eps) {
  if (!(eps > 0.0)) throw ParameterError("bvh_norm_bound: eps must be positive");
  return (1.0 + eps) * (s.sigma1 + s.sigma2 +
                        5.0 * s.sigma_star * std::sqrt(std::log(static_cast<double>(n))) /
                            std::sqrt(std::log1p(eps)));
}

}  // namespace rmt
