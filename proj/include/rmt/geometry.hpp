#ifndef RMT_GEOMETRY_HPP_
#define RMT_GEOMETRY_HPP_

#include <span>
#include <vector>

#include "rmt/ensemble.hpp"

namespace rmt {

/// Unit vector with its magnitude ranking cached.
///
/// `order()[k]` is the coordinate holding the (k+1)-th largest magnitude;
/// ties are broken by coordinate index so the ranking is deterministic.
class UnitVector {
 public:
  /// Requires | ||x||_2 - 1 | <= 1e-12; throws ParameterError otherwise.
  explicit UnitVector(Vector coords);
  /// Rescales a nonzero vector to unit norm.
  static UnitVector normalized(const Vector& x);

  const Vector& coords() const { return coords_; }
  const std::vector<int>& order() const { return order_; }
  int size() const { return static_cast<int>(coords_.size()); }
  double sup_norm() const;

 private:
  Vector coords_;
  std::vector<int> order_;
};

/// x restricted to the coordinates ranked first..last (1-based, inclusive)
/// by magnitude, zero elsewhere.
Vector rearranged_segment(const UnitVector& x, int first, int last);

/// ||x_[m+1:n]||_2, the distance from x to the m-sparse vectors.
double dist_to_sparse(const UnitVector& x, int m);
bool is_compressible(const UnitVector& x, int m, double delta);

/// ||x_[m+1:n]||_2 <= alpha sqrt(m) ||x_[m+1:n]||_inf.
bool is_dominated(const UnitVector& x, int m, double alpha);

struct LcdParams {
  double p = 0.01;
  double delta0 = 0.1;
  double theta_max = 1e4;
  double grid_step = 1e-3;

  void validate() const;
  /// (delta0 p)^{-1/2}: below this scale the lattice threshold is zero.
  double scale() const;
};

/// (delta0 p)^{-1/2} sqrt(log_+(sqrt(delta0 p) theta)).
double lcd_threshold(const LcdParams& params, double theta);

/// dist(theta x, Z^n).
double lattice_distance(const Vector& x, double theta);

/// True when dist(theta x, Z^n) < threshold(theta), with 1e-12 slack
/// on the strict side.
bool lcd_condition(const Vector& x, const LcdParams& params, double theta);

struct LcdResult {
  /// Smallest grid-refined theta satisfying the condition; +inf if none in
  /// (0, theta_max].
  double lcd;
  /// (delta0 p)^{-1/2}.
  double scale_bound;
  /// 1 / (2 ||x||_inf).
  double sup_norm_bound;
};

/// Least common denominator by a coarse scan with step grid_step starting at
/// the scale bound, then bisection on the first bracket where the condition
/// switches on. The returned value satisfies the condition, so it is an
/// upper bound for the infimum.
LcdResult lcd(const UnitVector& x, const LcdParams& params);

/// Estimated sup_u P(||Z - u|| <= eps) with u restricted to sample points.
/// Rows of `samples` are the observations. Scalars use a sorted sliding
/// window; higher dimensions compare all pairs.
double levy_concentration(const Eigen::MatrixXd& samples, double eps);
double levy_concentration(std::span<const double> samples, double eps);

struct ThresholdParams {
  double K = 1.0;
  double R = 1.0;
  double p = 0.0;
  int n = 0;
  double c_tilde = 2.0;
  int ell0 = 0;
  double rho = 0.0;
};

/// ell0 = ceil(log(1/(8p)) / log sqrt(pn)), rho = (c_tilde (K + R))^{-ell0-6}.
/// Natural logarithms. Requires pn > 1 and 0 < p < 1/8.
ThresholdParams threshold_params(double K, double R, double p, int n,
                                 double c_tilde = 2.0);

/// 2 (2 - alpha) / (1 - alpha) for alpha in (0, 1).
double moment_threshold_q(double alpha);

}  // namespace rmt

#endif  // RMT_GEOMETRY_HPP_
