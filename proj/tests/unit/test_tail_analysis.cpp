#include <doctest.h>

#include <cmath>
#include <limits>

#include "mte/errors.hpp"
#include "mte/mte_engine.hpp"
#include "mte/primes.hpp"
#include "mte/tail_analysis.hpp"

using namespace mte;

TEST_CASE("empirical ccdf") {
  const auto c = Ccdf::from_samples({1, 2, 2, 5});
  CHECK(c.survival(2) == 0.25);
  CHECK(c.survival(0.5) == 1.0);
  CHECK(c.survival(5) == 0.0);
  CHECK(c.survival(7) == 0.0);
  const auto lv = c.levels();
  REQUIRE(lv.size() == 3);
  CHECK(lv[0].second == 0.75);
  CHECK(lv[1].second == 0.25);
  CHECK(lv[2].second == 0.0);
  CHECK_THROWS_AS(Ccdf::from_samples({}), DomainError);
}

TEST_CASE("loglog slope on exact power laws") {
  std::vector<double> u, s2, s1;
  for (int i = 0; i < 50; ++i) {
    const double v = std::pow(10.0, 1.0 + 0.05 * i);
    u.push_back(v);
    s2.push_back(std::pow(v, -2.0));
    s1.push_back(1.0 / v);
  }
  CHECK(std::fabs(loglog_slope(u, s2, 0, 1e9) + 2.0) < 1e-9);
  CHECK(std::fabs(loglog_slope(u, s1, 0, 1e9) + 1.0) < 1e-9);
  CHECK_THROWS_AS(loglog_slope(u, s2, 10, 20), FitError);
  const std::vector<double> flat(50, 0.5);
  CHECK_THROWS_AS(loglog_slope(u, flat, 0, 1e9), FitError);
}

TEST_CASE("hill estimator") {
  const std::vector<double> geo{1, 2, 4, 8, 16};
  CHECK(hill_estimator(geo, 4) == doctest::Approx(1.0 / (2.5 * std::log(2.0))).epsilon(1e-12));
  CHECK(hill_estimator(geo, 4) == doctest::Approx(0.5771).epsilon(1e-4));
  const std::vector<double> flat(10, 3.0);
  CHECK(hill_estimator(flat, 5) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(hill_estimator(geo, 0), DomainError);
  CHECK_THROWS_AS(hill_estimator(geo, 5), DomainError);
  CHECK_THROWS_AS(hill_estimator(std::vector<double>{1, -2, 3}, 1), DomainError);

  // Pareto(alpha) quantile grids: the estimate approaches alpha.
  auto pareto = [](double alpha, std::size_t n) {
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = std::pow(1.0 - (i + 0.5) / n, -1.0 / alpha);
    return q;
  };
  double prev_err = 1e9;
  for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
    const double err = std::fabs(hill_estimator(pareto(1.5, n), n / 2) - 1.5);
    CHECK(err <= prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.01);
  CHECK(std::fabs(hill_estimator(pareto(2.0, 100000), 316) - 2.0) < 0.1);
}

TEST_CASE("conditional gap tail") {
  const auto prior = PrimePrior::build(2.0, 10);
  CHECK(conditional_gap_tail_exact(prior, 10, 35) == doctest::Approx(1.0 / 65.0).epsilon(1e-14));
  CHECK(conditional_gap_tail_exact(prior, 10, 5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(conditional_gap_tail_exact(prior, 10, 10 * 9 + 1) == 0.0);
  CHECK_THROWS_AS(conditional_gap_tail_exact(prior, 0, 1), DomainError);
  CHECK_THROWS_AS(conditional_gap_tail_exact(prior, 1, 0), DomainError);
}

TEST_CASE("mixture gap tail") {
  const auto prior = PrimePrior::build(2.0, 10);
  const auto point = MixingMeasure::make({{10.0, 1.0}});
  for (double u : {1.0, 5.0, 35.0, 60.0}) {
    CHECK(mixture_gap_tail(prior, point, u) == conditional_gap_tail_exact(prior, 10, u));
  }
  const auto nu = MixingMeasure::make({{10.0, 0.5}, {100.0, 0.5}});
  CHECK(mixture_gap_tail(prior, nu, 35) ==
        doctest::Approx(0.5 * prior.tail_mass(4.5) + 0.5 * prior.tail_mass(1.35)).epsilon(1e-15));
  CHECK(mixture_gap_tail(prior, nu, 1e12) == 0.0);
  CHECK_THROWS_AS(MixingMeasure::make({{1.0, 0.5}}), DomainError);
  CHECK_THROWS_AS(MixingMeasure::make({{-1.0, 1.0}}), DomainError);
}

TEST_CASE("dkw band around the exact conditional survival") {
  const auto prior = PrimePrior::build(2.0, 100000);
  CHECK(dkw_epsilon(1000000, 1e-6) == doctest::Approx(std::sqrt(std::log(2e6) / 2e6)));
  Rng rng(42);
  for (double x : {1.0, 10.0}) {
    std::vector<double> g;
    for (const auto& v : gap_samples(prior, BigNat(static_cast<std::uint64_t>(x)), 200000, rng)) g.push_back(v.to_double());
    const auto emp = Ccdf::from_samples(g);
    const double xs[] = {x};
    const auto pts = gap_support_points(prior, xs);
    CHECK(pts.size() == prior.primes().size());
    const auto cmp = dkw_compare(emp, pts, [&](double u) { return conditional_gap_tail_exact(prior, x, u); }, 1e-6);
    CHECK(cmp.violations == 0);
    CHECK(cmp.sup_distance < cmp.epsilon);
  }
}

TEST_CASE("slow variation factors") {
  CHECK(slow_variation_factor(SlowVariation::none, 2.0, 10.0) == 1.0);
  CHECK(slow_variation_factor(SlowVariation::log_power, 2.0, std::exp(3.0)) == doctest::Approx(1.0 / 9.0));
  CHECK_THROWS_AS(slow_variation_factor(SlowVariation::none, 2.0, 1.0), DomainError);
}

TEST_CASE("regular variation index after exact slow-variation removal") {
  const auto primes = sieve_primes(10000000);
  for (double beta : {1.5, 2.0, 3.0}) {
    const auto prior = PrimePrior::build(beta, 10000000, primes);
    const auto fit = regular_variation_slope(prior, 1.0, 1e3, 1e6, SlowVariation::omega_exact);
    CHECK(std::fabs(fit.deviation_from_proof) <= 0.15);
    CHECK(fit.deviation_from_statement == doctest::Approx(fit.deviation_from_proof + 1.0));
  }
}

TEST_CASE("default fit window stops short of the truncation cliff") {
  const auto prior = PrimePrior::build(2.0, 1000000);
  const auto [lo, hi] = default_fit_window(prior, 1.0, 1000000);
  CHECK(hi == doctest::Approx(10.0 * lo));
  CHECK(conditional_gap_tail_exact(prior, 1.0, hi) < 1e-4);
  CHECK(hi < 1e6);
}
