#include <doctest.h>

#include <vector>

#include "rmt/errors.hpp"
#include "rmt/random.hpp"
#include "rmt/stats.hpp"

using namespace rmt;

TEST_CASE("wilson interval closed form") {
  const Interval a = wilson_interval(5, 10);
  CHECK(a.lower == doctest::Approx(0.2365931).epsilon(1e-6));
  CHECK(a.upper == doctest::Approx(0.7634069).epsilon(1e-6));
  const Interval z = wilson_interval(0, 100);
  CHECK(z.lower == 0.0);
  CHECK(z.upper == doctest::Approx(0.0369935).epsilon(1e-5));
  const Interval f = wilson_interval(100, 100);
  CHECK(f.upper == 1.0);
  CHECK(f.lower == doctest::Approx(1.0 - 0.0369935).epsilon(1e-6));
  CHECK_THROWS(wilson_interval(3, 0));
  CHECK_THROWS(wilson_interval(4, 3));
}

TEST_CASE("wilson interval coverage") {
  const int n = 500;
  const int reps = 1000;
  for (double q : {0.01, 0.1, 0.5}) {
    int covered = 0;
    for (int r = 0; r < reps; ++r) {
      CounterStream s(1234, static_cast<std::uint64_t>(r) + static_cast<std::uint64_t>(q * 1e6));
      long k = 0;
      for (int i = 0; i < n; ++i)
        k += to_unit_closed_open(s.block(static_cast<std::uint64_t>(i), 0)[0],
                                 s.block(static_cast<std::uint64_t>(i), 0)[1]) < q;
      covered += wilson_interval(k, n).contains(q) ? 1 : 0;
    }
    CHECK(covered >= 930);
  }
}

TEST_CASE("type 7 quantiles") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 5.0);
  CHECK(quantile_sorted(v, 0.5) == 3.0);
  CHECK(quantile_sorted(v, 0.25) == 2.0);
  CHECK(quantile_sorted(v, 0.1) == doctest::Approx(1.4));
  const std::vector<double> w{0, 10};
  CHECK(quantile_sorted(w, 0.95) == doctest::Approx(9.5));
  const std::vector<double> one{7};
  CHECK(quantile_sorted(one, 0.3) == 7.0);
}

TEST_CASE("summary statistics") {
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);
  const SummaryStats s = summarize(v);
  CHECK(s.count == 100);
  CHECK(s.mean == 50.5);
  CHECK(s.median == 50.5);
  CHECK(s.quantiles[0] == doctest::Approx(1.99));
  CHECK(s.quantiles[5] == doctest::Approx(99.01));
  CHECK_FALSE(s.wilson_ci.has_value());

  const std::vector<double> b{0, 1, 1, 0, 1, 0, 0, 0};
  const SummaryStats sb = summarize(b);
  REQUIRE(sb.wilson_ci.has_value());
  const Interval ci = wilson_interval(3, 8);
  CHECK(sb.wilson_ci->lower == ci.lower);
  CHECK(sb.wilson_ci->upper == ci.upper);
  CHECK(sb.mean == 0.375);
}
