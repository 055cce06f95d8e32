#include <doctest.h>

#include <cmath>

#include "mte/errors.hpp"
#include "mte/mte_engine.hpp"
#include "mte/omega_code.hpp"

using namespace mte;

TEST_CASE("degenerate prior: X_t = 2^t") {
  const auto prior = PrimePrior::build(1.0, 2);
  Rng rng(1);
  const auto tr = simulate(prior, 3, rng, 1);
  REQUIRE(tr.steps.size() == 3);
  CHECK(tr.final_state == BigNat(8));
  CHECK(tr.steps[2].log2_x == 3.0);
  CHECK(tr.steps[2].len_x == 7);
  const auto rows = averaging_series(tr);
  CHECK(rows[2].len_x_per_t == doctest::Approx(7.0 / 3.0));
  CHECK(rows[2].mean_len_p == 3.0);
  CHECK(rows[2].log2_x_per_t == 1.0);
  CHECK(rows[0].len_x_per_t == 3.0);
  CHECK(rows[0].mean_len_p == 3.0);
  CHECK(growth_rate(tr) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("single step reproduces the drawn prime") {
  const auto prior = PrimePrior::build(1.5, 1000);
  Rng rng(2);
  const auto tr = simulate(prior, 1, rng, 100);
  REQUIRE(tr.steps.size() == 1);
  CHECK(tr.final_state == BigNat(tr.steps[0].prime));
  CHECK(growth_rate(tr) == doctest::Approx(std::log(static_cast<double>(tr.steps[0].prime))));
  const auto rows = averaging_series(tr);
  CHECK(rows[0].len_x_per_t == static_cast<double>(omega_len(tr.steps[0].prime)));
}

TEST_CASE("exact state equals the shadow product; log2 accumulates; strictly increasing") {
  const auto prior = PrimePrior::build(1.5, 100000);
  Rng rng(3);
  const auto tr = simulate(prior, 100, rng, 1);
  mpz_class shadow = 1;
  double prev_log = 0.0;
  double sum_log = 0.0;
  std::uint64_t sum_len = 0;
  for (const auto& s : tr.steps) {
    shadow *= static_cast<unsigned long>(s.prime);
    sum_log += std::log2(static_cast<double>(s.prime));
    sum_len += omega_len(s.prime);
    REQUIRE(s.len_x == omega_len(BigNat(shadow)));
    REQUIRE(std::fabs(s.log2_x - sum_log) < 1e-9);
    REQUIRE(s.log2_x > prev_log);
    REQUIRE(s.sum_len_p == sum_len);
    prev_log = s.log2_x;
  }
  CHECK(tr.final_state == BigNat(shadow));
  CHECK(tr.steps.front().log2_x == doctest::Approx(std::log2(static_cast<double>(tr.steps.front().prime))));
}

TEST_CASE("thinning keeps every thin-th step and the last one") {
  const auto prior = PrimePrior::build(2.0, 1000);
  Rng rng(4);
  const auto tr = simulate(prior, 1050, rng, 100);
  REQUIRE(tr.steps.size() == 11);
  CHECK(tr.steps[0].t == 100);
  CHECK(tr.steps[9].t == 1000);
  CHECK(tr.steps[10].t == 1050);
  CHECK_THROWS_AS(simulate(prior, 0, rng), DomainError);
  CHECK_THROWS_AS(simulate(prior, 10, rng, 0), DomainError);
}

TEST_CASE("results do not depend on the worker count") {
  const auto prior = PrimePrior::build(2.0, 100000);
  const auto one = simulate_many(prior, 2000, 77, 6, 10, 1);
  const auto many = simulate_many(prior, 2000, 77, 6, 10, 4);
  REQUIRE(one.size() == 6);
  for (std::size_t k = 0; k < one.size(); ++k) {
    CHECK(one[k].seed == derive_seed(77, k));
    CHECK(one[k].final_state == many[k].final_state);
    REQUIRE(one[k].steps.size() == many[k].steps.size());
    for (std::size_t i = 0; i < one[k].steps.size(); ++i) {
      REQUIRE(one[k].steps[i].prime == many[k].steps[i].prime);
      REQUIRE(one[k].steps[i].log2_x == many[k].steps[i].log2_x);
    }
  }
  CHECK_FALSE(one[0].final_state == one[1].final_state);
}

TEST_CASE("growth rate of a small prior") {
  const auto prior = PrimePrior::build(2.0, 10);
  Rng rng(5);
  const auto tr = simulate(prior, 10000, rng);
  CHECK(std::fabs(growth_rate(tr) - std::log(2.0) * 1.3120) < 0.05 * std::log(2.0) * 1.3120);
}

TEST_CASE("gap samples") {
  Rng rng(6);
  const auto degenerate = PrimePrior::build(1.0, 2);
  for (const auto& g : gap_samples(degenerate, 10, 100, rng)) REQUIRE(g == BigNat(10));

  const auto prior = PrimePrior::build(2.0, 10);
  const int n = 100000;
  const auto gaps = gap_samples(prior, 1, n, rng);
  int counts[7] = {0};
  for (const auto& g : gaps) {
    const auto v = *g.to_u64();
    REQUIRE((v == 1 || v == 2 || v == 4 || v == 6));
    ++counts[v];
  }
  CHECK(std::fabs(counts[1] / double(n) - 32.0 / 65.0) < 0.01);
  CHECK(std::fabs(counts[2] / double(n) - 32.0 / 65.0) < 0.01);
  CHECK(std::fabs(counts[4] / double(n) - 1.0 / 130.0) < 0.002);

  const int big_n = 1000000;
  const auto g10 = gap_samples(prior, 10, big_n, rng);
  int above = 0;
  for (const auto& g : g10) above += g > BigNat(35);
  const double p = prior.tail_mass(1.0 + 35.0 / 10.0);
  CHECK(p == doctest::Approx(1.0 / 65.0));
  CHECK(std::fabs(above / double(big_n) - p) < 3.0 * std::sqrt(p * (1 - p) / big_n));
  CHECK_THROWS_AS(gap_samples(prior, 0, 10, rng), DomainError);
}
