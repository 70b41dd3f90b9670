#include "rmt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

constexpr double kConditionSlack = 1e-12;

void check_rank_range(const UnitVector& x, int first, int last) {
  if (first < 1 || first > last || last > x.size()) {
    throw ParameterError("rank range out of bounds");
  }
}

double tail_norm_sq(const UnitVector& x, int m) {
  double s = 0.0;
  for (int k = m; k < x.size(); ++k) {
    const double v = x.coords()[x.order()[static_cast<std::size_t>(k)]];
    s += v * v;
  }
  return s;
}

}  // namespace

UnitVector::UnitVector(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() == 0) throw ParameterError("unit vector must be non-empty");
  if (!coords_.allFinite()) throw ParameterError("unit vector must be finite");
  if (std::abs(coords_.norm() - 1.0) > 1e-12) {
    throw ParameterError("vector is not unit norm");
  }
  order_.resize(static_cast<std::size_t>(coords_.size()));
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [this](int a, int b) {
    return std::abs(coords_[a]) > std::abs(coords_[b]);
  });
}

UnitVector UnitVector::normalized(const Vector& x) {
  const double norm = x.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ParameterError("cannot normalize a zero or non-finite vector");
  }
  return UnitVector(x / norm);
}

double UnitVector::sup_norm() const { return coords_.cwiseAbs().maxCoeff(); }

Vector rearranged_segment(const UnitVector& x, int first, int last) {
  check_rank_range(x, first, last);
  Vector out = Vector::Zero(x.size());
  for (int k = first - 1; k < last; ++k) {
    const int idx = x.order()[static_cast<std::size_t>(k)];
    out[idx] = x.coords()[idx];
  }
  return out;
}

double dist_to_sparse(const UnitVector& x, int m) {
  if (m < 1 || m > x.size()) throw ParameterError("dist_to_sparse: m out of range");
  return std::sqrt(tail_norm_sq(x, m));
}

bool is_compressible(const UnitVector& x, int m, double delta) {
  return dist_to_sparse(x, m) <= delta;
}

bool is_dominated(const UnitVector& x, int m, double alpha) {
  if (m < 1 || m > x.size()) throw ParameterError("is_dominated: m out of range");
  if (!(alpha > 0.0)) throw ParameterError("is_dominated: alpha must be positive");
  if (m == x.size()) return true;
  const double tail_l2 = std::sqrt(tail_norm_sq(x, m));
  // The largest tail magnitude sits at rank m + 1.
  const double tail_sup = std::abs(x.coords()[x.order()[static_cast<std::size_t>(m)]]);
  return tail_l2 <= alpha * std::sqrt(static_cast<double>(m)) * tail_sup;
}

void LcdParams::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("lcd: p must lie in (0, 1]");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw ParameterError("lcd: delta0 must lie in (0, 1)");
  if (!(theta_max > 0.0)) throw ParameterError("lcd: theta_max must be positive");
  if (!(grid_step > 0.0)) throw ParameterError("lcd: grid_step must be positive");
  if (grid_step > 1e-3 * theta_max) {
    throw ParameterError("lcd: grid_step must not exceed 1e-3 * theta_max");
  }
}

double LcdParams::scale() const { return 1.0 / std::sqrt(delta0 * p); }

double lcd_threshold(const LcdParams& params, double theta) {
  const double a = std::sqrt(params.delta0 * params.p);
  const double log_plus = std::max(0.0, std::log(a * theta));
  return std::sqrt(log_plus) / a;
}

double lattice_distance(const Vector& x, double theta) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double y = theta * x[i];
    const double d = y - std::nearbyint(y);
    s += d * d;
  }
  return std::sqrt(s);
}

bool lcd_condition(const Vector& x, const LcdParams& params, double theta) {
  return lattice_distance(x, theta) + kConditionSlack < lcd_threshold(params, theta);
}

LcdResult lcd(const UnitVector& x, const LcdParams& params) {
  params.validate();
  LcdResult out{kInfinity, params.scale(), 0.5 / x.sup_norm()};
  const double start = params.scale();
  if (start >= params.theta_max) return out;

  const Vector& v = x.coords();
  double lo = start;  // condition fails here: the threshold is zero
  double hi = start;
  bool found = false;
  for (long k = 1;; ++k) {
    hi = std::min(start + static_cast<double>(k) * params.grid_step, params.theta_max);
    if (lcd_condition(v, params, hi)) {
      found = true;
      break;
    }
    if (hi >= params.theta_max) break;
    lo = hi;
  }
  if (!found) return out;

  // Invariant: condition fails at lo, holds at hi.
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lcd_condition(v, params, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.lcd = hi;
  return out;
}

double levy_concentration(std::span<const double> samples, double eps) {
  if (samples.empty()) throw ParameterError("levy_concentration: no samples");
  if (!(eps > 0.0)) throw ParameterError("levy_concentration: eps must be positive");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t best = 0;
  std::size_t lo = 0, hi = 0;
  for (std::size_t c = 0; c < sorted.size(); ++c) {
    const double u = sorted[c];
    while (sorted[lo] < u - eps) ++lo;
    while (hi < sorted.size() && sorted[hi] <= u + eps) ++hi;
    best = std::max(best, hi - lo);
  }
  return static_cast<double>(best) / static_cast<double>(sorted.size());
}

double levy_concentration(const Eigen::MatrixXd& samples, double eps) {
  if (samples.rows() == 0) throw ParameterError("levy_concentration: no samples");
  if (samples.cols() == 1) {
    return levy_concentration(
        std::span<const double>(samples.data(), static_cast<std::size_t>(samples.rows())), eps);
  }
  if (!(eps > 0.0)) throw ParameterError("levy_concentration: eps must be positive");
  const double eps_sq = eps * eps;
  Eigen::Index best = 0;
  for (Eigen::Index c = 0; c < samples.rows(); ++c) {
    Eigen::Index count = 0;
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
      count += (samples.row(r) - samples.row(c)).squaredNorm() <= eps_sq;
    }
    best = std::max(best, count);
  }
  return static_cast<double>(best) / static_cast<double>(samples.rows());
}

ThresholdParams threshold_params(double K, double R, double p, int n, double c_tilde) {
  if (!(K >= 1.0 && R >= 1.0)) throw ParameterError("threshold_params: K, R must be >= 1");
  if (!(p > 0.0 && p < 0.125)) throw ParameterError("threshold_params: p must lie in (0, 1/8)");
  if (!(p * n > 1.0)) throw ParameterError("threshold_params: requires pn > 1");
  if (!(c_tilde > 0.0)) throw ParameterError("threshold_params: c_tilde must be positive");
  ThresholdParams t;
  t.K = K;
  t.R = R;
  t.p = p;
  t.n = n;
  t.c_tilde = c_tilde;
  t.ell0 = static_cast<int>(
      std::ceil(std::log(1.0 / (8.0 * p)) / std::log(std::sqrt(p * n))));
  t.rho = std::pow(c_tilde * (K + R), -static_cast<double>(t.ell0) - 6.0);
  return t;
}

double moment_threshold_q(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError("moment_threshold_q: alpha must lie in (0, 1)");
  }
  return 2.0 * (2.0 - alpha) / (1.0 - alpha);
}

}  // namespace rmt
