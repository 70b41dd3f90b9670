#include "rmt/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rmt/errors.hpp"
#include "rmt/exact_rank.hpp"
#include "rmt/random.hpp"
#include "rmt/spectral.hpp"

namespace rmt {

namespace {

constexpr int kExactRankMaxN = 64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint32_t trial_counter(long trial_index) {
  if (trial_index < 0 || trial_index > 0xFFFFFFFFl) {
    throw ParameterError("trial index out of range");
  }
  return static_cast<std::uint32_t>(trial_index);
}

// Replicates a constant shift to size n.
std::vector<double> resize_shift(const std::vector<double>& shift, int n) {
  if (shift.empty()) return {};
  for (double s : shift) {
    if (s != shift.front()) {
      throw ParameterError("sweeps require an empty or constant diagonal shift");
    }
  }
  return std::vector<double>(static_cast<std::size_t>(n), shift.front());
}

EnsembleSpec at_point(const EnsembleSpec& base, int n, double p) {
  EnsembleSpec e = base;
  e.n = n;
  e.p = p;
  e.shift = resize_shift(base.shift, n);
  if (e.adjacency_mode) e.dist = ShiftedBernoulli{p};
  return e;
}


double max_abs_entry(const SparseMatrix& m) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < m.nonZeros(); ++k) r = std::max(r, std::abs(m.valuePtr()[k]));
  return r;
}

double pattern_statistic(const EnsembleSpec& spec, const Matrix& m, double threshold) {
  const int width = std::min(spec.n - 1,
                             static_cast<int>(std::floor(std::sqrt(spec.p * spec.n))));
  std::vector<int> cols_j = {0};
  std::vector<int> cols_jprime;
  for (int k = 1; k <= width; ++k) cols_jprime.push_back(k);
  return pattern_count(m, cols_j, cols_jprime, threshold);
}

double evaluate(const ExperimentSpec& spec, const EnsembleSpec& e, const SeedSpec& seed) {
  switch (spec.statistic) {
    case Statistic::kSMin:
      return smallest_singular_value(sample_matrix(e, seed));
    case Statistic::kSMax:
      return largest_singular_value(sample_sparse(e, seed), 1e-9);
    case Statistic::kCond:
      return spectral_summary(sample_matrix(e, seed), SpectralMethod::kIterative).cond;
    case Statistic::kSingular:
      return is_singular_sample(e, sample_matrix(e, seed)) ? 1.0 : 0.0;
    case Statistic::kZeroRow:
      return mask_has_zero_row(e, seed) ? 1.0 : 0.0;
    case Statistic::kMaxEntry:
      return max_abs_entry(sample_sparse(e, seed));
    case Statistic::kSeginerStat:
      return seginer_column_stat(sample_sparse(e, seed));
    case Statistic::kColumnDistance: {
      const Matrix m = sample_matrix(e, seed);
      return e.n < 2 ? m.norm() : column_span_distances(m).minCoeff();
    }
    case Statistic::kPatternCount:
      return pattern_statistic(e, sample_matrix(e, seed), spec.pattern_threshold);
  }
  return std::nan("");
}

template <typename Fn>
std::vector<double> collect(long trials, unsigned threads, Fn&& fn) {
  std::vector<double> values(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](long t) { values[static_cast<std::size_t>(t)] = fn(t); });
  return values;
}

}  // namespace

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::kSMin: return "smin";
    case Statistic::kSMax: return "smax";
    case Statistic::kCond: return "cond";
    case Statistic::kSingular: return "singular";
    case Statistic::kZeroRow: return "zero_row";
    case Statistic::kMaxEntry: return "max_entry";
    case Statistic::kSeginerStat: return "seginer";
    case Statistic::kColumnDistance: return "column_distance";
    case Statistic::kPatternCount: return "pattern_count";
  }
  return "unknown";
}

Statistic parse_statistic(const std::string& name) {
  for (Statistic s : {Statistic::kSMin, Statistic::kSMax, Statistic::kCond,
                      Statistic::kSingular, Statistic::kZeroRow, Statistic::kMaxEntry,
                      Statistic::kSeginerStat, Statistic::kColumnDistance,
                      Statistic::kPatternCount}) {
    if (to_string(s) == name) return s;
  }
  throw ParameterError("unknown statistic '" + name + "'");
}

void parallel_for(long count, unsigned threads, const std::function<void(long)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, std::max(1l, count)));
  if (threads <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (long i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw ParameterError("experiment: trials must be >= 1");
  if (condition_K && !(*condition_K > 0.0)) {
    throw ParameterError("experiment: condition_K must be positive");
  }
  if (!(pattern_threshold > 0.0)) {
    throw ParameterError("experiment: pattern_threshold must be positive");
  }
  for (const EnsembleSpec& e : points()) e.validate();
}

std::vector<EnsembleSpec> ExperimentSpec::points() const {
  if (sweep.empty()) return {ensemble};
  std::vector<EnsembleSpec> out;
  for (const SweepPoint& pt : sweep) out.push_back(at_point(ensemble, pt.n, pt.p));
  return out;
}

std::uint64_t ExperimentSpec::point_seed(std::size_t k) const {
  return k == 0 ? master_seed : splitmix64(master_seed ^ splitmix64(k));
}

bool is_singular_sample(const EnsembleSpec& spec, const Matrix& m) {
  const bool integer_law = spec.adjacency_mode || is_integer_valued(spec.dist);
  if (integer_law && spec.n <= kExactRankMaxN && has_integer_entries(m)) {
    return exactly_singular(m);
  }
  return smallest_singular_value_estimate(m).singular;
}

TrialRecord run_trial(const ExperimentSpec& spec, const EnsembleSpec& point,
                      std::uint64_t point_seed, long trial_index) {
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.n = point.n;
  rec.p = point.p;
  const auto start = std::chrono::steady_clock::now();
  try {
    const SeedSpec seed{point_seed, trial_counter(trial_index)};
    if (spec.condition_K && std::isfinite(*spec.condition_K)) {
      const double norm = largest_singular_value(sample_sparse_unshifted(point, seed), 1e-9);
      rec.conditioned = norm <= *spec.condition_K * std::sqrt(point.n * point.p);
    }
    rec.value = evaluate(spec, point, seed);
  } catch (const std::exception& ex) {
    rec.value = std::nan("");
    rec.error = ex.what();
  }
  if (spec.record_timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  return rec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<void(const PointResult&)>& on_point) {
  spec.validate();
  ExperimentResult result;
  result.spec = spec;
  const auto points = spec.points();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const EnsembleSpec& point = points[k];
    const std::uint64_t seed = spec.point_seed(k);
    PointResult pr;
    pr.n = point.n;
    pr.p = point.p;
    pr.records.resize(static_cast<std::size_t>(spec.trials));
    parallel_for(spec.trials, spec.threads, [&](long t) {
      pr.records[static_cast<std::size_t>(t)] = run_trial(spec, point, seed, t);
    });
    std::vector<double> kept;
    for (const TrialRecord& r : pr.records) {
      if (!r.error.empty()) {
        ++pr.failed_count;
        continue;
      }
      if (!r.conditioned) continue;
      ++pr.conditioned_count;
      kept.push_back(r.value);
    }
    const long ok = spec.trials - pr.failed_count;
    pr.conditioning_frequency =
        ok > 0 ? static_cast<double>(pr.conditioned_count) / static_cast<double>(ok) : 0.0;
    pr.summary = summarize(kept);
    if (on_point) on_point(pr);
    result.points.push_back(std::move(pr));
  }
  return result;
}

TailCurve tail_curve_from_values(std::span<const double> smin_values, int n, double p,
                                 std::span<const double> eps_grid) {
  if (eps_grid.empty()) throw ParameterError("smin_tail_curve: empty eps grid");
  if (smin_values.empty()) throw ParameterError("smin_tail_curve: no trials");
  TailCurve curve;
  curve.n = n;
  curve.p = p;
  curve.trials = static_cast<long>(smin_values.size());
  const double scale = std::sqrt(p / n);
  auto count_below = [&](double threshold) {
    return static_cast<long>(std::count_if(smin_values.begin(), smin_values.end(),
                                           [&](double s) { return s <= threshold; }));
  };
  const long singular = count_below(0.0);
  curve.singular_frequency = static_cast<double>(singular) / static_cast<double>(curve.trials);
  curve.fit_delta = wilson_interval(singular, curve.trials).upper;

  std::vector<double> grid(eps_grid.begin(), eps_grid.end());
  std::sort(grid.begin(), grid.end());
  for (double eps : grid) {
    if (!(eps >= 0.0)) throw ParameterError("smin_tail_curve: eps must be >= 0");
    const long hits = std::isinf(eps) ? curve.trials : count_below(eps * scale);
    TailPoint pt{eps, static_cast<double>(hits) / static_cast<double>(curve.trials),
                 wilson_interval(hits, curve.trials)};
    if (!curve.points.empty() && pt.probability < curve.points.back().probability) {
      curve.monotone = false;
    }
    if (eps > 0.0 && std::isfinite(eps)) {
      curve.fit_C = std::max(curve.fit_C, (pt.probability - curve.fit_delta) / eps);
    }
    curve.points.push_back(pt);
  }
  return curve;
}

TailCurve smin_tail_curve(const ExperimentSpec& spec, std::span<const double> eps_grid) {
  if (eps_grid.empty()) throw ParameterError("smin_tail_curve: empty eps grid");
  ExperimentSpec s = spec;
  s.statistic = Statistic::kSMin;
  s.condition_K.reset();
  if (!s.sweep.empty()) s.sweep.resize(1);
  const ExperimentResult result = run_experiment(s);
  const PointResult& pt = result.points.front();
  std::vector<double> values;
  for (const TrialRecord& r : pt.records) {
    if (r.error.empty()) values.push_back(r.value);
  }
  return tail_curve_from_values(values, pt.n, effective_density(s.points().front()), eps_grid);
}

double zero_row_analytic(int n, double p) {
  const double row_zero = std::pow(1.0 - p, n);
  return 1.0 - std::pow(1.0 - row_zero, n);
}

ZeroRowReport zero_row_probability(int n, double p, long trials, std::uint64_t seed,
                                   unsigned threads) {
  if (trials < 1) throw ParameterError("zero_row_probability: trials must be >= 1");
  EnsembleSpec spec;
  spec.n = n;
  spec.p = p;
  spec.dist = Constant{1.0};
  spec.validate();
  const auto hits = collect(trials, threads, [&](long t) {
    return mask_has_zero_row(spec, {seed, trial_counter(t)}) ? 1.0 : 0.0;
  });
  const long count = static_cast<long>(std::count(hits.begin(), hits.end(), 1.0));
  ZeroRowReport r;
  r.trials = trials;
  r.empirical = static_cast<double>(count) / static_cast<double>(trials);
  r.analytic = zero_row_analytic(n, p);
  r.ci = wilson_interval(count, trials);
  r.consistent = r.ci.contains(r.analytic);
  return r;
}

namespace {

std::vector<ScanPoint> scan(const EnsembleSpec& base, double alpha,
                            std::span<const int> n_grid, long trials, std::uint64_t seed,
                            unsigned threads, bool condition) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("scan: alpha must lie in [0, 1)");
  if (trials < 1) throw ParameterError("scan: trials must be >= 1");
  std::vector<ScanPoint> out;
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const int n = n_grid[k];
    const double p = std::pow(static_cast<double>(n), -alpha);
    const EnsembleSpec e = at_point(base, n, p);
    e.validate();
    const std::uint64_t point_seed = k == 0 ? seed : splitmix64(seed ^ splitmix64(k));
    const auto values = collect(trials, threads, [&](long t) {
      const SeedSpec s{point_seed, trial_counter(t)};
      if (condition) {
        return spectral_summary(sample_matrix(e, s), SpectralMethod::kIterative).cond / n;
      }
      return largest_singular_value(sample_sparse(e, s), 1e-9) / std::sqrt(n * p);
    });
    out.push_back({n, p, summarize(values)});
  }
  return out;
}

EnsembleSpec base_for(const EntryDistribution& dist) {
  EnsembleSpec e;
  e.dist = dist;
  return e;
}

}  // namespace

std::vector<ScanPoint> norm_scaling_scan(const EnsembleSpec& base, double alpha,
                                         std::span<const int> n_grid, long trials,
                                         std::uint64_t seed, unsigned threads) {
  return scan(base, alpha, n_grid, trials, seed, threads, false);
}

std::vector<ScanPoint> norm_scaling_scan(const EntryDistribution& dist, double alpha,
                                         std::span<const int> n_grid, long trials,
                                         std::uint64_t seed, unsigned threads) {
  return scan(base_for(dist), alpha, n_grid, trials, seed, threads, false);
}

std::vector<ScanPoint> condition_growth_scan(const EnsembleSpec& base, double alpha,
                                             std::span<const int> n_grid, long trials,
                                             std::uint64_t seed, unsigned threads) {
  return scan(base, alpha, n_grid, trials, seed, threads, true);
}

std::vector<ScanPoint> condition_growth_scan(const EntryDistribution& dist, double alpha,
                                             std::span<const int> n_grid, long trials,
                                             std::uint64_t seed, unsigned threads) {
  return scan(base_for(dist), alpha, n_grid, trials, seed, threads, true);
}

double median_spread(std::span<const ScanPoint> scan_points) {
  if (scan_points.empty()) return std::nan("");
  double lo = kInfinity, hi = -kInfinity;
  for (const ScanPoint& s : scan_points) {
    lo = std::min(lo, s.stats.median);
    hi = std::max(hi, s.stats.median);
  }
  return hi / lo;
}

double effective_density(const EnsembleSpec& spec) {
  if (spec.adjacency_mode) return spec.p;
  if (const auto* b = std::get_if<ShiftedBernoulli>(&spec.dist)) return spec.p * b->mu;
  return spec.p;
}

bool DistanceLemmaReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.holds; });
}

namespace {

void check_lemma_params(std::span<const double> eps_grid, double rho, double M, int n) {
  if (eps_grid.empty()) throw ParameterError("distance lemma: empty eps grid");
  if (!(rho > 0.0)) throw ParameterError("distance lemma: rho must be positive");
  if (!(M > 0.0 && M < n)) throw ParameterError("distance lemma: need 0 < M < n");
}

}  // namespace

DistanceLemmaReport distance_lemma_check(const EnsembleSpec& spec, long trials,
                                         std::uint64_t seed,
                                         std::span<const double> eps_grid, double rho,
                                         double M, unsigned threads) {
  spec.validate();
  check_lemma_params(eps_grid, rho, M, spec.n);
  if (trials < 1) throw ParameterError("distance lemma: trials must be >= 1");
  const int n = spec.n;
  struct Sample {
    double smin;
    Vector dist;
  };
  std::vector<Sample> samples(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](long t) {
    const Matrix m = sample_matrix(spec, {seed, trial_counter(t)});
    samples[static_cast<std::size_t>(t)] = {smallest_singular_value(m),
                                            column_span_distances(m)};
  });

  DistanceLemmaReport report;
  report.rho = rho;
  report.M = M;
  report.density = effective_density(spec);
  report.trials = trials;
  const double p = report.density;
  for (double eps : eps_grid) {
    DistanceLemmaRow row;
    row.eps = eps;
    const double lhs_threshold = eps * rho * rho * std::sqrt(p / n);
    const double rhs_threshold = rho * std::sqrt(p) * eps;
    long lhs_hits = 0;
    long rhs_hits = 0;
    for (const Sample& s : samples) {
      lhs_hits += s.smin <= lhs_threshold;
      rhs_hits += (s.dist.array() <= rhs_threshold).count();
    }
    row.lhs = static_cast<double>(lhs_hits) / static_cast<double>(trials);
    row.lhs_ci = wilson_interval(lhs_hits, trials);
    // Columns are exchangeable, so sum_j P(.) = n q with q the pooled rate.
    // The interval treats the pool as `trials` observations, which is
    // conservative for within-matrix dependence.
    const double pooled = static_cast<double>(rhs_hits) / (static_cast<double>(trials) * n);
    const Interval pooled_ci =
        wilson_interval(std::lround(pooled * static_cast<double>(trials)), trials);
    const double factor = n / M;
    row.rhs = factor * pooled;
    row.rhs_ci = {factor * pooled_ci.lower, factor * pooled_ci.upper};
    row.holds = row.lhs_ci.lower <= row.rhs_ci.upper;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<std::pair<Matrix, double>> enumerate_bernoulli_matrices(int n, double mu) {
  if (n < 1 || n > 4) throw ParameterError("enumeration supports 1 <= n <= 4");
  if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("enumeration: mu must lie in [0, 1]");
  const int cells = n * n;
  std::vector<std::pair<Matrix, double>> out;
  out.reserve(std::size_t{1} << cells);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << cells); ++mask) {
    Matrix m(n, n);
    double prob = 1.0;
    for (int c = 0; c < cells; ++c) {
      const bool one = (mask >> c) & 1u;
      m(c / n, c % n) = one ? 1.0 : 0.0;
      prob *= one ? mu : 1.0 - mu;
    }
    out.emplace_back(std::move(m), prob);
  }
  return out;
}

DistanceLemmaReport distance_lemma_exact(int n, double mu, std::span<const double> eps_grid,
                                         double rho, double M) {
  check_lemma_params(eps_grid, rho, M, n);
  const auto outcomes = enumerate_bernoulli_matrices(n, mu);
  std::vector<double> smins;
  std::vector<Vector> dists;
  for (const auto& [m, prob] : outcomes) {
    // Exact singularity decides zeros; the SVD supplies the magnitude.
    smins.push_back(exactly_singular(m) ? 0.0 : full_svd_singular_values(m).minCoeff());
    Vector d(n);
    for (int j = 0; j < n; ++j) d[j] = column_span_distance(m, j);
    dists.push_back(d);
  }
  DistanceLemmaReport report;
  report.rho = rho;
  report.M = M;
  report.density = mu;
  report.exact = true;
  for (double eps : eps_grid) {
    DistanceLemmaRow row;
    row.eps = eps;
    const double lhs_threshold = eps * rho * rho * std::sqrt(mu / n);
    const double rhs_threshold = rho * std::sqrt(mu) * eps;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      const double prob = outcomes[k].second;
      if (smins[k] <= lhs_threshold) row.lhs += prob;
      row.rhs += prob * static_cast<double>((dists[k].array() <= rhs_threshold).count()) / M;
    }
    row.lhs_ci = {row.lhs, row.lhs};
    row.rhs_ci = {row.rhs, row.rhs};
    row.holds = row.lhs <= row.rhs;
    report.rows.push_back(row);
  }
  return report;
}

TensorizationReport tensorization_check(double q, int n, double c, long trials,
                                        std::uint64_t seed) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("tensorization: q must lie in (0, 1)");
  if (n < 1 || trials < 1) throw ParameterError("tensorization: need n, trials >= 1");
  const double rate = std::log(1.0 / q);  // P(V > 1) = exp(-rate) = q
  const double threshold = c * q * n / rate;
  long hits = 0;
  for (long t = 0; t < trials; ++t) {
    const CounterStream stream(seed, trial_counter(t));
    double sum = 0.0;
    for (int j = 0; j < n && sum <= threshold; ++j) {
      sum += -std::log(stream.uniform_pair(static_cast<std::uint64_t>(j), 0)[0]) / rate;
    }
    hits += sum <= threshold;
  }
  return {n, static_cast<double>(hits) / static_cast<double>(trials),
          wilson_interval(hits, trials)};
}

}  // namespace rmt
