#ifndef RMT_STATS_HPP_
#define RMT_STATS_HPP_

#include <array>
#include <optional>
#include <span>

namespace rmt {

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Wilson score interval for `successes` out of `trials`; z = 1.959964 is
/// the two-sided 95% normal quantile.
Interval wilson_interval(long successes, long trials, double z = 1.959963984540054);

inline constexpr std::array<double, 6> kSummaryQuantiles = {0.01, 0.05, 0.25,
                                                            0.75, 0.95, 0.99};

struct SummaryStats {
  long count = 0;
  double mean = 0.0;
  double median = 0.0;
  /// Ordered as kSummaryQuantiles.
  std::array<double, 6> quantiles{};
  /// Present when every value is 0 or 1.
  std::optional<Interval> wilson_ci;
};

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

/// Summary of the values; NaNs must be filtered out by the caller.
SummaryStats summarize(std::span<const double> values);

}  // namespace rmt

#endif  // RMT_STATS_HPP_
