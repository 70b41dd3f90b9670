// Acceptance run: one PASS/FAIL line per criterion, with the measured
// quantity and wall time against its budget. Exit status is the number of
// failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "oracles/golub_kahan.hpp"
#include "oracles/lcd_scan.hpp"
#include "rmt/ensemble.hpp"
#include "rmt/geometry.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/random.hpp"
#include "rmt/spectral.hpp"

using namespace rmt;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Vector gaussian_vector(int n, std::uint64_t seed, std::uint64_t index) {
  const CounterStream s(seed, static_cast<std::uint32_t>(index));
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const auto [u1, u2] = s.uniform_pair(static_cast<std::uint64_t>(i), 1);
    v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  return v;
}

// 1. 2x2 Bernoulli(1/2) singularity frequency against 5/8.
Outcome exact_singularity() {
  ExperimentSpec s;
  s.name = "singular2";
  s.ensemble.n = 2;
  s.ensemble.dist = ShiftedBernoulli{0.5};
  s.trials = 100000;
  s.master_seed = 2024;
  s.statistic = Statistic::kSingular;
  s.threads = workers();
  const double f = run_experiment(s).points[0].summary.mean;
  return {std::abs(f - 0.625) <= 0.006, fmt("P(singular) = %.5f, target 0.625 +- 0.006", f)};
}

// 2. Iterative extreme singular values against the bidiagonal oracle.
Outcome svd_equivalence() {
  double worst_min = 0.0, worst_max = 0.0;
  int fallbacks = 0;
  for (std::uint32_t t = 0; t < 100; ++t) {
    EnsembleSpec e;
    e.n = 50;
    e.p = t % 2 == 0 ? 0.3 : 0.5;
    if (t % 3 == 1) e.dist = StandardGaussian{};
    if (t % 3 == 2) e.dist = SymmetricPareto{4.5};
    const Matrix m = sample_matrix(e, {77, t});
    const std::vector<double> ref = oracle::singular_values(m);
    const double ref_max = ref.front(), ref_min = ref.back();
    const SminEstimate smin = smallest_singular_value_estimate(m);
    const double smax = largest_singular_value(sparse_view(m));
    if (smin.method != SpectralMethod::kIterative) ++fallbacks;
    worst_min = std::max(worst_min, std::abs(smin.value - ref_min) / ref_min);
    worst_max = std::max(worst_max, std::abs(smax - ref_max) / ref_max);
  }
  return {worst_min <= 1e-8 && worst_max <= 1e-6,
          fmt("max rel err s_min %.2e (<= 1e-8), s_max %.2e (<= 1e-6), %d full-SVD fallbacks",
              worst_min, worst_max, fallbacks)};
}

// 3. Zero-row frequencies on both sides of the ln n / n threshold.
Outcome zero_row_transition() {
  const int n = 200;
  const double lo_p = std::log(n) / (2.0 * n), hi_p = 2.0 * std::log(n) / n;
  const ZeroRowReport lo = zero_row_probability(n, lo_p, 10000, 31, workers());
  const ZeroRowReport hi = zero_row_probability(n, hi_p, 10000, 32, workers());
  const bool ok = lo.consistent && hi.consistent && lo.empirical > 0.2 && hi.empirical < 0.02;
  return {ok, fmt("sub: emp %.4f vs %.4f CI [%.4f, %.4f]; super: emp %.4f vs %.4f CI [%.4f, %.4f]",
                  lo.empirical, lo.analytic, lo.ci.lower, lo.ci.upper, hi.empirical, hi.analytic,
                  hi.ci.lower, hi.ci.upper)};
}

// 4. Tail curve of s_min / sqrt(p/n) for sparse Rademacher matrices.
Outcome smin_scaling() {
  ExperimentSpec s;
  s.name = "smin_tail";
  s.ensemble.n = 200;
  s.ensemble.p = 0.2;
  s.trials = 5000;
  s.master_seed = 404;
  s.threads = workers();
  const std::vector<double> grid{0.05, 0.1, 0.15, 0.2, 0.3, 0.4};
  const TailCurve c = smin_tail_curve(s, grid);
  std::string pts;
  for (const auto& pt : c.points) pts += fmt(" %.2f:%.4f", pt.eps, pt.probability);
  const bool ok = c.monotone && c.fit_C <= 10.0 && c.fit_delta <= 0.02;
  return {ok, fmt("monotone=%d C=%.3f (<= 10) delta=%.4f (<= 0.02); curve%s", c.monotone ? 1 : 0,
                  c.fit_C, c.fit_delta, pts.c_str())};
}

// 5. Normalized spectral norm of sparse Rademacher matrices, p = n^-1/2.
Outcome norm_scaling() {
  const std::vector<int> grid{100, 400, 1600};
  const auto scan = norm_scaling_scan(Rademacher{}, 0.5, grid, 100, 505, workers());
  const double spread = median_spread(scan);
  return {spread <= 1.5, fmt("medians %.4f %.4f %.4f, spread %.4f (<= 1.5)", scan[0].stats.median,
                             scan[1].stats.median, scan[2].stats.median, spread)};
}

// 6. Heavy tails below the moment threshold make the normalized norm grow.
Outcome heavy_tail() {
  const std::vector<int> grid{100, 6400};
  const auto pareto = norm_scaling_scan(SymmetricPareto{4.5}, 0.5, grid, 100, 606, workers());
  const auto rad = norm_scaling_scan(Rademacher{}, 0.5, grid, 100, 607, workers());
  const double rp = pareto[1].stats.median / pareto[0].stats.median;
  const double rr = rad[1].stats.median / rad[0].stats.median;
  return {rp >= 1.2 && rr <= 1.3,
          fmt("q(0.5) = %.0f; pareto medians %.4f -> %.4f ratio %.4f (>= 1.2); rademacher "
              "%.4f -> %.4f ratio %.4f (<= 1.3)",
              moment_threshold_q(0.5), pareto[0].stats.median, pareto[1].stats.median, rp,
              rad[0].stats.median, rad[1].stats.median, rr)};
}

// 7. Condition number over n for sparse Gaussian matrices, p = n^-0.4.
Outcome condition_band() {
  const std::vector<int> grid{100, 200, 400};
  const auto scan = condition_growth_scan(StandardGaussian{}, 0.4, grid, 200, 707, workers());
  const double spread = median_spread(scan);
  return {spread <= 2.0, fmt("median cond/n %.3f %.3f %.3f, spread %.4f (<= 2)",
                             scan[0].stats.median, scan[1].stats.median, scan[2].stats.median,
                             spread)};
}

// 8. LCD lower bounds on 1000 vectors, fine-scan agreement on 50.
Outcome lcd_invariants() {
  const LcdParams params;
  const int sizes[] = {8, 32, 128};
  long violations = 0, mismatches = 0;
  double worst_gap = 0.0;
  for (std::uint32_t t = 0; t < 1000; ++t) {
    const int n = sizes[t % 3];
    const UnitVector x = UnitVector::normalized(gaussian_vector(n, 808, t));
    const LcdResult r = lcd(x, params);
    if (!(r.lcd >= params.scale() && r.lcd >= 0.5 / x.sup_norm())) ++violations;
    if (t % 20 == 0) {
      const double ref =
          oracle::lcd_scan(x.coords(), params.p, params.delta0, 1e-4, params.theta_max);
      const double gap = std::abs(r.lcd - ref);
      worst_gap = std::max(worst_gap, gap);
      if (!(gap <= params.grid_step)) ++mismatches;
    }
  }
  return {violations == 0 && mismatches == 0,
          fmt("%ld bound violations / 1000, %ld oracle mismatches / 50, worst gap %.2e (<= %.0e)",
              violations, mismatches, worst_gap, params.grid_step)};
}

// 9. 2 ||Mx||^2 - ||fold(M) x||^2 >= -1e-12 ||M||_F^2 ||x||^2.
Outcome fold_invariant() {
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint32_t t = 0; t < 1000; ++t) {
    EnsembleSpec e;
    e.n = 4 + static_cast<int>(t % 61);
    e.p = 0.1 + 0.9 * ((t * 37) % 100) / 100.0;
    if (t % 2) e.dist = StandardGaussian{};
    const Matrix m = sample_matrix(e, {909, t});
    const Vector x = gaussian_vector(e.n, 910, t);
    const double lhs = 2.0 * (m * x).squaredNorm() - (fold_matrix(m) * x).squaredNorm();
    worst = std::min(worst, lhs / (m.squaredNorm() * x.squaredNorm()));
  }
  return {worst >= -1e-12, fmt("min normalized slack %.3e (>= -1e-12)", worst)};
}

// 10. Levy concentration of a standard Gaussian at eps = 1.
Outcome levy_calibration() {
  std::vector<double> g(100000);
  const CounterStream s(1010, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto [u1, u2] = s.uniform_pair(i, 1);
    g[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  const double est = levy_concentration(g, 1.0);
  const double target = std::erf(1.0 / std::sqrt(2.0));
  return {std::abs(est - target) <= 0.01, fmt("estimate %.5f, target %.5f +- 0.01", est, target)};
}

// 11. Invertibility via distance: exact at n = 2, Monte-Carlo at n = 100.
Outcome distance_lemma() {
  const std::vector<double> exact_grid{0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
  const DistanceLemmaReport ex = distance_lemma_exact(2, 0.5, exact_grid, 0.5, 1.0);
  EnsembleSpec e;
  e.n = 100;
  e.p = 0.3;
  const std::vector<double> grid{0.05, 0.1, 0.2, 0.4, 0.8};
  const DistanceLemmaReport mc = distance_lemma_check(e, 1000, 1111, grid, 0.5, 10.0, workers());
  std::string rows;
  for (const auto& r : mc.rows) rows += fmt(" %.2f:%.4f<=%.4f", r.eps, r.lhs, r.rhs);
  return {ex.all_hold() && mc.all_hold(),
          fmt("exact n=2 holds=%d; n=100 holds=%d (rho 0.5, M 10) lhs<=rhs%s", ex.all_hold(),
              mc.all_hold(), rows.c_str())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"exact singularity oracle", 10, exact_singularity},
      {"SVD oracle equivalence", 60, svd_equivalence},
      {"zero-row phase transition", 30, zero_row_transition},
      {"s_min scaling", 600, smin_scaling},
      {"norm scaling", 600, norm_scaling},
      {"heavy-tail sharpness", 1200, heavy_tail},
      {"condition-number band", 900, condition_band},
      {"LCD invariants", 300, lcd_invariants},
      {"fold invariant", 10, fold_invariant},
      {"Levy estimator calibration", 5, levy_calibration},
      {"distance-lemma consistency", 300, distance_lemma},
  };
  std::printf("threads: %u\n", workers());
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto& c = criteria[k];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.ok && secs < c.budget_s;
    failures += pass ? 0 : 1;
    std::printf("%s %2zu %s: %s [%.1f s / %.0f s]\n", pass ? "PASS" : "FAIL", k + 1, c.name,
                o.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  return failures;
}
