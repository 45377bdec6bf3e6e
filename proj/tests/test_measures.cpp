#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "mmaprel/measures.hpp"

using namespace mmaprel;
using mmaprel::testing::data_path;
using mmaprel::testing::policy;

namespace {

SystemModel example(int which = 2) {
  return instantiate(load_model_file(data_path("paper_example.json")), policy(which));
}

}  // namespace

TEST_CASE("transient distribution at time zero is the initial vector") {
  SystemModel mo = example();
  MarkedProcess proc = build_blocks(mo);
  RowVector theta = initial_distribution(mo);
  MacroDistribution dist = transient(proc, theta, 0.0);
  CHECK((dist.global - theta).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(availability(dist) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("discrete transient follows the semigroup step") {
  SystemModel mo = discretize(load_model_file(data_path("paper_example.json")), 0.05);
  MarkedProcessD proc = build_blocks_d(mo);
  RowVector theta = initial_distribution(mo);
  RowVector p = theta;
  for (long long n = 0; n <= 10; ++n) {
    MacroDistribution dist = transient(proc, theta, n);
    CHECK((dist.global - p).cwiseAbs().maxCoeff() < 1e-12);
    p = p * proc.transition;
  }
}

TEST_CASE("stationary distribution: reduction agrees with the full solve") {
  // cross_check = true throws if the two methods disagree beyond 1e-9
  SystemModel mo = example();
  MarkedProcess proc = build_blocks(mo);
  MacroDistribution pi = stationary(proc, true);
  CHECK(pi.global.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pi.global.minCoeff() >= -1e-12);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    SystemModel c = mmaprel::testing::random_model(TimeMode::Continuous, rng);
    CHECK_NOTHROW(stationary(build_blocks(c), true));
    SystemModel d = mmaprel::testing::random_model(TimeMode::Discrete, rng);
    CHECK_NOTHROW(stationary(build_blocks_d(d), true));
  }
}

TEST_CASE("stationary macro occupancies for the balanced policy") {
  SystemModel mo = example(2);
  MacroDistribution pi = stationary(build_blocks(mo));
  CHECK(pi.mass(kCR) == doctest::Approx(0.0777).epsilon(0.05));
  CHECK(pi.mass(kPM) == doctest::Approx(0.0034).epsilon(0.10));
  CHECK(availability(pi) == doctest::Approx(0.9168).epsilon(1e-3));
}

TEST_CASE("availability complement identity and extremes") {
  for (int which : {1, 2, 3}) {
    SystemModel mo = example(which);
    MacroDistribution pi = stationary(build_blocks(mo));
    double down = pi.mass(kRF) + pi.mass(kNRF) + pi.mass(kCR) + pi.mass(kPM);
    CHECK(availability(pi) == doctest::Approx(1.0 - down).epsilon(1e-12));
  }
  SystemModel mo3 = example(3);
  MacroDistribution pi3 = stationary(build_blocks(mo3));
  CHECK(availability(pi3) == doctest::Approx(0.9187).epsilon(1e-3));
}

TEST_CASE("reliability distribution of the first operational exit") {
  SystemModel mo = example(1);
  MarkedProcess proc = build_blocks(mo);
  RowVector theta = initial_distribution(mo);
  ContinuousPH rel = reliability_ph(proc, theta);
  CHECK(rel.order() == 156);
  CHECK(survival(rel, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  double prev = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double s = survival(rel, 0.6 * k);
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
  CHECK(mean(rel) == doctest::Approx(13.3705).epsilon(0.02));
}

TEST_CASE("reliability means across the three policies") {
  const double want[3] = {13.3705, 36.8556, 61.0399};
  for (int which : {1, 2, 3}) {
    SystemModel mo = example(which);
    ContinuousPH rel = reliability_ph(build_blocks(mo), initial_distribution(mo));
    CHECK(mean(rel) == doctest::Approx(want[which - 1]).epsilon(0.02));
  }
}

TEST_CASE("event counts start at zero and balance in steady state") {
  SystemModel mo = example();
  MarkedProcess proc = build_blocks(mo);
  RowVector theta = initial_distribution(mo);
  EventRates zero = event_counts(proc, theta, 0.0);
  CHECK(zero.rf == 0.0);
  CHECK(zero.r == 0.0);
  CHECK(zero.nvp == 0.0);

  MacroDistribution pi = stationary(proc);
  EventRates psi = event_rates_stationary(proc, pi);
  CHECK(psi.rf == doctest::Approx(psi.cr).epsilon(1e-9));
  CHECK(psi.nrf == doctest::Approx(psi.nu).epsilon(1e-9));
  CHECK(psi.r >= psi.nvp);
}

TEST_CASE("transient measures converge to their stationary values") {
  // the third policy's transient deficit constants are all below one event,
  // so the 1e-4 rate tolerance is meaningful at t = 1e4; the vacation-heavy
  // policies carry an inherent O(1/t) bias of ~5 return events
  SystemModel mo = example(3);
  MarkedProcess proc = build_blocks(mo);
  RowVector theta = initial_distribution(mo);
  MacroDistribution pi = stationary(proc);

  MacroDistribution late = transient(proc, theta, 1e4);
  CHECK((late.global - pi.global).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(availability(late) == doctest::Approx(availability(pi)).epsilon(1e-6));

  const double t = 1e4;
  EventRates counts = event_counts(proc, theta, t);
  EventRates psi = event_rates_stationary(proc, pi);
  CHECK(std::abs(counts.rf / t - psi.rf) < 1e-4);
  CHECK(std::abs(counts.nrf / t - psi.nrf) < 1e-4);
  CHECK(std::abs(counts.cr / t - psi.cr) < 1e-4);
  CHECK(std::abs(counts.pm / t - psi.pm) < 1e-4);
  CHECK(std::abs(counts.r / t - psi.r) < 1e-4);
  CHECK(std::abs(counts.nu / t - psi.nu) < 1e-4);
  CHECK(std::abs(counts.nvp / t - psi.nvp) < 1e-4);
}

TEST_CASE("discrete stationary and event rates are self-consistent") {
  SystemModel mo = discretize(example(2), 0.05);
  MarkedProcessD proc = build_blocks_d(mo);
  MacroDistribution pi = stationary(proc, true);
  CHECK(pi.global.sum() == doctest::Approx(1.0).epsilon(1e-12));
  EventRates psi = event_rates_stationary(proc, pi);
  CHECK(psi.rf == doctest::Approx(psi.cr).epsilon(1e-9));
  CHECK(psi.nrf == doctest::Approx(psi.nu).epsilon(1e-9));

  RowVector theta = initial_distribution(mo);
  const long long n = 200000;
  EventRates counts = event_counts(proc, theta, n);
  CHECK(std::abs(counts.pm / double(n) - psi.pm) < 1e-4);
}

TEST_CASE("scaling all rates leaves the stationary distribution unchanged") {
  SystemModel mo = example();
  MacroDistribution base = stationary(build_blocks(mo));
  SystemModel scaled = mo;
  const double lambda = 7.5;
  scaled.T *= lambda;
  scaled.T_r0 *= lambda;
  scaled.T_nr0 *= lambda;
  scaled.L *= lambda;
  scaled.V *= lambda;
  scaled.S1 *= lambda;
  scaled.S2 *= lambda;
  MacroDistribution pi = stationary(build_blocks(scaled));
  CHECK((pi.global - base.global).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("geometric grid shape") {
  auto grid = geometric_grid(0.1, 1e4, 400);
  CHECK(grid.size() == 400);
  CHECK(grid.front() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(1e4).epsilon(1e-12));
  for (size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] > grid[k - 1]);
}
