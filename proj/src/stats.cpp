#include "rmt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rmt/errors.hpp"

namespace rmt {

Interval wilson_interval(long successes, long trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw ParameterError("wilson_interval: need 0 <= successes <= trials, trials > 0");
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  // Exact endpoints at the boundaries; avoids rounding just outside [0, 1].
  const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lower, upper};
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = static_cast<long>(values.size());
  if (values.empty()) {
    s.mean = s.median = std::nan("");
    s.quantiles.fill(std::nan(""));
    return s;
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
  s.median = quantile_sorted(sorted, 0.5);
  for (std::size_t k = 0; k < kSummaryQuantiles.size(); ++k) {
    s.quantiles[k] = quantile_sorted(sorted, kSummaryQuantiles[k]);
  }
  const bool binary = std::all_of(sorted.begin(), sorted.end(),
                                  [](double v) { return v == 0.0 || v == 1.0; });
  if (binary) {
    const auto ones = std::count(sorted.begin(), sorted.end(), 1.0);
    s.wilson_ci = wilson_interval(static_cast<long>(ones), s.count);
  }
  return s;
}

}  // namespace rmt
