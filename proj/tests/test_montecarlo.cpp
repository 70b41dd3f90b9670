#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rmt/errors.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/spectral.hpp"

using namespace rmt;

namespace {

ExperimentSpec small_spec(Statistic stat, EntryDistribution dist, int n, double p, long trials) {
  ExperimentSpec s;
  s.name = "t";
  s.ensemble.n = n;
  s.ensemble.p = p;
  s.ensemble.dist = dist;
  s.trials = trials;
  s.master_seed = 99;
  s.statistic = stat;
  return s;
}

std::vector<double> values(const PointResult& pt) {
  std::vector<double> v;
  for (const auto& r : pt.records) v.push_back(r.value);
  return v;
}

}  // namespace

TEST_CASE("statistic names round-trip") {
  for (Statistic s : {Statistic::kSMin, Statistic::kSMax, Statistic::kCond,
                      Statistic::kSingular, Statistic::kZeroRow, Statistic::kMaxEntry,
                      Statistic::kSeginerStat, Statistic::kColumnDistance,
                      Statistic::kPatternCount}) {
    CHECK(parse_statistic(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_statistic("bogus"), ParameterError);
}

TEST_CASE("campaigns are deterministic and thread-count independent") {
  ExperimentSpec s = small_spec(Statistic::kSMin, Rademacher{}, 2, 1.0, 10);
  const auto a = run_experiment(s);
  const auto b = run_experiment(s);
  CHECK(values(a.points[0]) == values(b.points[0]));

  s = small_spec(Statistic::kCond, StandardGaussian{}, 30, 0.5, 24);
  s.sweep = {{20, 0.5}, {30, 0.3}};
  const auto serial = run_experiment(s);
  s.threads = 4;
  const auto parallel = run_experiment(s);
  REQUIRE(serial.points.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(values(serial.points[k]) == values(parallel.points[k]));
    CHECK(serial.points[k].summary.mean == parallel.points[k].summary.mean);
    CHECK(serial.points[k].summary.quantiles == parallel.points[k].summary.quantiles);
    for (std::size_t t = 0; t < serial.points[k].records.size(); ++t)
      CHECK(serial.points[k].records[t].trial_index == static_cast<long>(t));
  }
  CHECK(serial.points[0].n == 20);
  CHECK(serial.points[1].p == 0.3);
  CHECK(values(serial.points[0]) != values(serial.points[1]));
}

TEST_CASE("trivial statistics") {
  const auto r = run_experiment(small_spec(Statistic::kCond, Constant{1.0}, 1, 1.0, 5));
  for (double v : values(r.points[0])) CHECK(v == 1.0);

  ExperimentSpec s = small_spec(Statistic::kMaxEntry, Rademacher{}, 10, 1.0, 3);
  for (double v : values(run_experiment(s).points[0])) CHECK(v == 1.0);

  s = small_spec(Statistic::kZeroRow, Rademacher{}, 10, 1.0, 3);
  for (double v : values(run_experiment(s).points[0])) CHECK(v == 0.0);

  s = small_spec(Statistic::kSMax, Constant{1.0}, 7, 1.0, 2);
  for (double v : values(run_experiment(s).points[0])) CHECK(v == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("invalid specs are rejected") {
  ExperimentSpec s = small_spec(Statistic::kSMin, Rademacher{}, 4, 1.0, 0);
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.trials = 1;
  s.condition_K = -1.0;
  CHECK_THROWS_AS(s.validate(), ParameterError);
}

TEST_CASE("2x2 Bernoulli singularity frequency") {
  ExperimentSpec s = small_spec(Statistic::kSingular, ShiftedBernoulli{0.5}, 2, 1.0, 100000);
  const auto r = run_experiment(s);
  const auto& sum = r.points[0].summary;
  CHECK(std::abs(sum.mean - 0.625) <= 0.006);
  REQUIRE(sum.wilson_ci.has_value());
  CHECK(sum.wilson_ci->contains(0.625));
  // enumeration oracle
  double exact = 0.0;
  for (const auto& [m, prob] : enumerate_bernoulli_matrices(2, 0.5))
    exact += (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) == 0.0) ? prob : 0.0;
  CHECK(exact == 0.625);
}

TEST_CASE("continuous laws use the spectral singularity threshold") {
  EnsembleSpec e;
  e.n = 3;
  e.dist = StandardGaussian{};
  Matrix m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 0, 1, 0;
  CHECK(is_singular_sample(e, m));
  CHECK_FALSE(is_singular_sample(e, Matrix::Identity(3, 3)));
  e.dist = Rademacher{};
  CHECK(is_singular_sample(e, m));
}

TEST_CASE("infinite conditioning bound changes nothing") {
  ExperimentSpec s = small_spec(Statistic::kSMin, Rademacher{}, 30, 0.3, 40);
  const auto plain = run_experiment(s);
  s.condition_K = std::numeric_limits<double>::infinity();
  const auto cond = run_experiment(s);
  CHECK(values(plain.points[0]) == values(cond.points[0]));
  CHECK(plain.points[0].summary.mean == cond.points[0].summary.mean);
  CHECK(plain.points[0].summary.median == cond.points[0].summary.median);
  CHECK(cond.points[0].conditioning_frequency == 1.0);
  CHECK(cond.points[0].conditioned_count == 40);

  s.condition_K = 0.5;  // too tight for any sample
  const auto tight = run_experiment(s);
  CHECK(tight.points[0].conditioned_count < 40);
  CHECK(values(tight.points[0]) == values(plain.points[0]));
}

TEST_CASE("tail curve endpoints and shape") {
  const std::vector<double> smin{0.0, 0.0, 0.1, 0.2, 0.5, 1.0, 2.0, 3.0};
  const std::vector<double> grid{std::numeric_limits<double>::infinity(), 0.0, 1.0, 4.0};
  const TailCurve c = tail_curve_from_values(smin, 4, 1.0, grid);
  REQUIRE(c.points.size() == 4);
  CHECK(c.points[0].eps == 0.0);
  CHECK(c.points[0].probability == 0.25);
  CHECK(c.singular_frequency == 0.25);
  CHECK(c.points[1].probability == 0.625);  // s_min <= 0.5
  CHECK(c.points[2].probability == 0.875);  // s_min <= 2
  CHECK(c.points.back().probability == 1.0);
  CHECK(c.monotone);
  for (const auto& pt : c.points) {
    if (pt.eps > 0.0 && std::isfinite(pt.eps))
      CHECK(pt.probability <= c.fit_C * pt.eps + c.fit_delta + 1e-15);
  }
  CHECK_THROWS_AS(tail_curve_from_values(smin, 4, 1.0, {}), ParameterError);

  ExperimentSpec s = small_spec(Statistic::kSMin, Rademacher{}, 20, 0.4, 200);
  const std::vector<double> g{0.0, 0.1, 0.5, 1.0, std::numeric_limits<double>::infinity()};
  const TailCurve rc = smin_tail_curve(s, g);
  CHECK(rc.monotone);
  CHECK(rc.points.back().probability == 1.0);
  const auto r = run_experiment([&] { auto t = s; t.statistic = Statistic::kSingular; return t; }());
  CHECK(rc.points.front().probability == doctest::Approx(r.points[0].summary.mean));
}

TEST_CASE("zero-row closed form and simulation") {
  CHECK(zero_row_analytic(2, 0.5) == 0.4375);
  CHECK(zero_row_analytic(10, 1.0) == 0.0);
  const double lo = std::log(200.0) / 400.0;
  CHECK(zero_row_analytic(200, lo) >= 0.2);
  CHECK(zero_row_analytic(200, 2.0 * std::log(200.0) / 200.0) < 0.02);

  const ZeroRowReport full = zero_row_probability(5, 1.0, 100, 1);
  CHECK(full.empirical == 0.0);
  CHECK(full.analytic == 0.0);
  const ZeroRowReport r = zero_row_probability(2, 0.5, 20000, 3);
  CHECK(r.analytic == 0.4375);
  CHECK(r.consistent);
  CHECK(std::abs(r.empirical - 0.4375) < 0.02);
}

TEST_CASE("scaling scans on constant ensembles") {
  const std::vector<int> grid{1, 4, 9};
  const auto norms = norm_scaling_scan(Constant{1.0}, 0.0, grid, 2, 5);
  for (const auto& pt : norms) CHECK(pt.stats.median == doctest::Approx(std::sqrt(pt.n)).epsilon(1e-9));

  const std::vector<int> one{1};
  for (const EntryDistribution& d :
       {EntryDistribution{StandardGaussian{}}, EntryDistribution{Rademacher{}}}) {
    const auto c = condition_growth_scan(d, 0.0, one, 5, 7);
    CHECK(c[0].stats.mean == 1.0);
  }

  EnsembleSpec diag;
  diag.dist = Constant{0.0};
  diag.shift = {1.0};
  const std::vector<int> sizes{2, 5, 10};
  const auto ident = condition_growth_scan(diag, 0.0, sizes, 2, 9);
  for (const auto& pt : ident) CHECK(pt.stats.median == doctest::Approx(1.0 / pt.n));
  CHECK(median_spread(ident) == doctest::Approx(5.0));
}

TEST_CASE("distance lemma: exact small cases") {
  const std::vector<double> grid{0.1, 0.5, 1.0, 2.0};
  const DistanceLemmaReport r = distance_lemma_exact(2, 0.5, grid, 0.5, 1.0);
  CHECK(r.exact);
  CHECK(r.all_hold());
  double total = 0.0;
  for (const auto& [m, prob] : enumerate_bernoulli_matrices(3, 0.3)) total += prob;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(enumerate_bernoulli_matrices(2, 0.5).size() == 16);

  EnsembleSpec ident;
  ident.n = 6;
  ident.dist = Constant{0.0};
  ident.shift.assign(6, 1.0);
  const DistanceLemmaReport id = distance_lemma_check(ident, 20, 1, grid, 0.5, 2.0);
  for (const auto& row : id.rows) CHECK(row.lhs == 0.0);
  CHECK(id.all_hold());
}

TEST_CASE("distance lemma: Monte-Carlo on a sparse Rademacher ensemble") {
  EnsembleSpec e;
  e.n = 40;
  e.p = 0.3;
  const std::vector<double> grid{0.05, 0.1, 0.2, 0.4};
  const DistanceLemmaReport r = distance_lemma_check(e, 200, 17, grid, 0.5, 10.0);
  CHECK(r.all_hold());
  for (std::size_t k = 1; k < r.rows.size(); ++k) {
    CHECK(r.rows[k].lhs >= r.rows[k - 1].lhs);
    CHECK(r.rows[k].rhs >= r.rows[k - 1].rhs);
  }
}

TEST_CASE("tensorization tail decays with n") {
  const auto a = tensorization_check(0.2, 100, 0.1, 2000, 1);
  const auto b = tensorization_check(0.2, 1000, 0.1, 2000, 1);
  CHECK(b.probability <= a.probability);
  CHECK(a.probability < 0.01);
  // a looser constant gives a visible decay
  const auto c = tensorization_check(0.2, 100, 4.5, 2000, 2);
  const auto d = tensorization_check(0.2, 1000, 4.5, 2000, 2);
  CHECK(c.probability > 0.05);
  CHECK(d.probability < c.probability / 5.0);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 4, [&](long i) { hits[static_cast<std::size_t>(i)] += 1; });
  for (int h : hits) CHECK(h == 1);
}
