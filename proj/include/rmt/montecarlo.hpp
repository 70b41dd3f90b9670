#ifndef RMT_MONTECARLO_HPP_
#define RMT_MONTECARLO_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmt/ensemble.hpp"
#include "rmt/stats.hpp"

namespace rmt {

enum class Statistic {
  kSMin,
  kSMax,
  kCond,
  kSingular,
  kZeroRow,
  kMaxEntry,
  kSeginerStat,
  kColumnDistance,
  kPatternCount,
};

std::string to_string(Statistic s);
/// Accepts the names produced by to_string; throws ParameterError otherwise.
Statistic parse_statistic(const std::string& name);

struct SweepPoint {
  int n = 0;
  double p = 0.0;
};

struct ExperimentSpec {
  std::string name = "experiment";
  EnsembleSpec ensemble;
  long trials = 1;
  std::uint64_t master_seed = 0;
  Statistic statistic = Statistic::kSMin;
  /// Restrict the summary to ||A - shift|| <= K sqrt(np). +inf disables the
  /// event without changing any output.
  std::optional<double> condition_K;
  /// Overrides (n, p) of the ensemble point by point when non-empty. A
  /// shift, if any, must be constant and is replicated to each size.
  std::vector<SweepPoint> sweep;
  /// Entry threshold of the PatternCount statistic.
  double pattern_threshold = 1.0;
  /// Worker threads; 0 picks hardware concurrency.
  unsigned threads = 1;
  /// Fill TrialRecord::wall_ms. Off by default so reruns are byte-identical.
  bool record_timing = false;

  void validate() const;
  /// The ensemble for every point, in order.
  std::vector<EnsembleSpec> points() const;
  /// Master seed of point k; point 0 uses master_seed itself.
  std::uint64_t point_seed(std::size_t k) const;
};

struct TrialRecord {
  long trial_index = 0;
  int n = 0;
  double p = 0.0;
  double value = 0.0;
  bool conditioned = true;
  double wall_ms = 0.0;
  /// Non-empty when the trial failed; value is then NaN.
  std::string error;
};

struct PointResult {
  int n = 0;
  double p = 0.0;
  std::vector<TrialRecord> records;
  /// Over successful trials inside the conditioning event.
  SummaryStats summary;
  long conditioned_count = 0;
  long failed_count = 0;
  double conditioning_frequency = 1.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<PointResult> points;
};

/// Statistic of one trial; pure function of (spec, point, trial_index).
TrialRecord run_trial(const ExperimentSpec& spec, const EnsembleSpec& point,
                      std::uint64_t point_seed, long trial_index);

/// Runs every point. Trials may execute concurrently; records are stored in
/// trial-index order so parallel and serial runs agree exactly. A trial that
/// throws is recorded with its error and excluded from the summary.
/// `on_point`, when set, is called after each point completes.
ExperimentResult run_experiment(
    const ExperimentSpec& spec,
    const std::function<void(const PointResult&)>& on_point = {});

/// Probability that an entry is nonzero: p, or p mu for Bernoulli values.
double effective_density(const EnsembleSpec& spec);

/// Singularity of one sample: exact rational rank for integer-valued laws
/// with integer shift and n <= 64, spectral threshold otherwise.
bool is_singular_sample(const EnsembleSpec& spec, const Matrix& m);

// ---------------------------------------------------------------------------
// s_min tail curve

struct TailPoint {
  double eps = 0.0;
  double probability = 0.0;
  Interval ci;
};

struct TailCurve {
  int n = 0;
  double p = 0.0;
  long trials = 0;
  std::vector<TailPoint> points;
  /// Envelope P(s_min <= eps sqrt(p/n)) <= C eps + delta over the grid with
  /// delta the Wilson upper bound of P(singular) and C the smallest slope
  /// that covers every positive grid point.
  double fit_C = 0.0;
  double fit_delta = 0.0;
  double singular_frequency = 0.0;
  bool monotone = true;
};

/// Curve from precomputed s_min values (one per trial).
TailCurve tail_curve_from_values(std::span<const double> smin_values, int n,
                                 double p, std::span<const double> eps_grid);

/// Runs the SMin statistic on the spec's first point and builds the curve.
/// Throws ParameterError on an empty grid.
TailCurve smin_tail_curve(const ExperimentSpec& spec,
                          std::span<const double> eps_grid);

// ---------------------------------------------------------------------------
// Zero rows

/// 1 - (1 - (1 - p)^n)^n.
double zero_row_analytic(int n, double p);

struct ZeroRowReport {
  double empirical = 0.0;
  double analytic = 0.0;
  Interval ci;
  long trials = 0;
  bool consistent = false;  // analytic inside the Wilson interval
};

ZeroRowReport zero_row_probability(int n, double p, long trials,
                                   std::uint64_t seed, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Scaling scans

struct ScanPoint {
  int n = 0;
  double p = 0.0;
  SummaryStats stats;
};

/// s_max / sqrt(np) with p = n^-alpha at each grid size. `base` provides the
/// law, diagonal policy, and constant shift.
std::vector<ScanPoint> norm_scaling_scan(const EnsembleSpec& base, double alpha,
                                         std::span<const int> n_grid, long trials,
                                         std::uint64_t seed, unsigned threads = 1);
std::vector<ScanPoint> norm_scaling_scan(const EntryDistribution& dist, double alpha,
                                         std::span<const int> n_grid, long trials,
                                         std::uint64_t seed, unsigned threads = 1);

/// cond(A) / n with p = n^-alpha at each grid size.
std::vector<ScanPoint> condition_growth_scan(const EnsembleSpec& base, double alpha,
                                             std::span<const int> n_grid, long trials,
                                             std::uint64_t seed, unsigned threads = 1);
std::vector<ScanPoint> condition_growth_scan(const EntryDistribution& dist, double alpha,
                                             std::span<const int> n_grid, long trials,
                                             std::uint64_t seed, unsigned threads = 1);

/// max median / min median over the scan.
double median_spread(std::span<const ScanPoint> scan);

// ---------------------------------------------------------------------------
// Invertibility-via-distance diagnostic

struct DistanceLemmaRow {
  double eps = 0.0;
  /// P(s_min <= eps rho^2 sqrt(p/n)). The infimum over incompressible
  /// vectors is at least s_min, so this bounds the lemma's left side from
  /// above and the check is conservative.
  double lhs = 0.0;
  Interval lhs_ci;
  /// (1/M) sum_j P(dist(col_j, span of others) <= rho sqrt(p) eps).
  double rhs = 0.0;
  Interval rhs_ci;
  bool holds = false;
};

struct DistanceLemmaReport {
  double rho = 0.5;
  double M = 1.0;
  double density = 0.0;
  long trials = 0;
  bool exact = false;
  std::vector<DistanceLemmaRow> rows;
  bool all_hold() const;
};

/// Monte-Carlo version. density is p times the mean of a Bernoulli law.
/// Holds at a row when lhs_ci.lower <= rhs_ci.upper.
DistanceLemmaReport distance_lemma_check(const EnsembleSpec& spec, long trials,
                                         std::uint64_t seed,
                                         std::span<const double> eps_grid,
                                         double rho, double M, unsigned threads = 1);

/// Exact version for n x n matrices with i.i.d. Bernoulli(mu) 0/1 entries,
/// by enumerating all 2^(n^2) outcomes (n <= 4). Holds when lhs <= rhs.
DistanceLemmaReport distance_lemma_exact(int n, double mu,
                                         std::span<const double> eps_grid,
                                         double rho, double M);

/// Probability of every outcome of an n x n i.i.d. Bernoulli(mu) 0/1
/// matrix, paired with the matrix (n <= 4).
std::vector<std::pair<Matrix, double>> enumerate_bernoulli_matrices(int n, double mu);

// ---------------------------------------------------------------------------

struct TensorizationReport {
  int n = 0;
  double probability = 0.0;
  Interval ci;
};

/// Empirical P(sum_j V_j <= c q n / log(1/q)) for V_j i.i.d. exponential
/// with P(V_j > 1) = q.
TensorizationReport tensorization_check(double q, int n, double c, long trials,
                                        std::uint64_t seed);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(long count, unsigned threads, const std::function<void(long)>& body);

}  // namespace rmt

#endif  // RMT_MONTECARLO_HPP_
