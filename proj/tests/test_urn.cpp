#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "polya/error.hpp"
#include "polya/simulate.hpp"
#include "polya/state.hpp"
#include "polya/stats.hpp"
#include "support/oracles.hpp"

using namespace polya;

TEST_CASE("model parameters enforce the standing assumptions") {
  CHECK_NOTHROW(ModelParams(2, 1, 1, 0.0));
  CHECK_NOTHROW(ModelParams(7, 3, 5, 1.0));
  CHECK_THROWS_AS(ModelParams(1, 1, 1, 0.5), ArgumentError);
  CHECK_THROWS_AS(ModelParams(2, 0, 1, 0.5), ArgumentError);
  CHECK_THROWS_AS(ModelParams(2, 1, 0, 0.5), ArgumentError);
  CHECK_THROWS_AS(ModelParams(2, 1, 1, -0.01), ArgumentError);
  CHECK_THROWS_AS(ModelParams(2, 1, 1, 1.01), ArgumentError);
  CHECK(ModelParams(3, 2, 5, 0.3).initial_total() == 7);
}

TEST_CASE("reinforcement probabilities") {
  SUBCASE("symmetric start makes alpha irrelevant") {
    for (double alpha : {0.0, 0.3, 1.0}) {
      const ModelParams p(2, 1, 1, alpha);
      const auto probs = reinforcement_probabilities(UrnSystemState::initial(p), p);
      CHECK(probs[0] == 0.5);
      CHECK(probs[1] == 0.5);
    }
  }
  SUBCASE("equal fractions give p_j = Z_t") {
    const ModelParams p(3, 2, 3, 0.7);
    const UrnSystemState s{4, {4, 4, 4}};
    for (double pj : reinforcement_probabilities(s, p)) CHECK(pj == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  }
  SUBCASE("mixed state, alpha = 1/2") {
    const ModelParams p(2, 1, 1, 0.5);
    const UrnSystemState s{1, {2, 1}};  // Z = (2/3, 1/3)
    const auto probs = reinforcement_probabilities(s, p);
    CHECK(probs[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
    CHECK(probs[1] == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  }
}

TEST_CASE("step rejects inconsistent states") {
  const ModelParams p(2, 1, 1, 0.5);
  Rng rng(1);
  CHECK_THROWS_AS(step(UrnSystemState{1, {3, 1}}, p, rng), InvariantViolation);
  CHECK_THROWS_AS(step(UrnSystemState{1, {0, 1}}, p, rng), InvariantViolation);
  CHECK_THROWS_AS(step(UrnSystemState{0, {1, 1, 1}}, p, rng), InvariantViolation);
  CHECK_NOTHROW(step(UrnSystemState{2, {3, 1}}, p, rng));
}

TEST_CASE("counts stay within [a, a + t] along a run") {
  const ModelParams p(4, 2, 3, 0.35);
  Rng rng(99);
  UrnSystemState s = UrnSystemState::initial(p);
  for (int i = 0; i < 500; ++i) {
    s = step(s, p, rng);
    CHECK_NOTHROW(check_consistent(s, p));
    double gap_sum = 0.0;
    for (std::size_t j = 0; j < 4; ++j) gap_sum += s.gap(j, p);
    CHECK(std::fabs(gap_sum) <= 1e-12);
  }
  CHECK(s.t == 500);
}

TEST_CASE("conditional law of one step matches the reinforcement probabilities") {
  const ModelParams p(3, 1, 2, 0.6);
  const UrnSystemState frozen{6, {5, 1, 3}};
  const auto probs = reinforcement_probabilities(frozen, p);
  constexpr int kDraws = 100000;
  std::vector<int> reds(3, 0);
  for (int i = 0; i < kDraws; ++i) {
    Rng rng(derive_seed(777, static_cast<std::uint64_t>(i)));
    const UrnSystemState next = step(frozen, p, rng);
    for (std::size_t j = 0; j < 3; ++j) reds[j] += static_cast<int>(next.red[j] - frozen.red[j]);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    const double freq = static_cast<double>(reds[j]) / kDraws;
    const double se = std::sqrt(probs[j] * (1.0 - probs[j]) / kDraws);
    CHECK(std::fabs(freq - probs[j]) <= 4.0 * se);
  }
}

TEST_CASE("simulate records the initial composition exactly at t = 0") {
  const ModelParams p(3, 2, 5, 0.4);
  const std::vector<std::int64_t> times{0};
  const Trajectory traj = simulate(p, 10, times, 5);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(traj.fraction(0, j) == 2.0 / 7.0);
    CHECK(traj.gap(0, j) == 0.0);
    CHECK(traj.compensator(0, j) == 0.0);
  }
  CHECK(traj.mean_fraction(0) == 2.0 / 7.0);
}

TEST_CASE("simulate matches a naive replay on the same stream") {
  const std::uint64_t seed = 0x5EEDF00DULL;
  SUBCASE("N=2, a=b=1, alpha=0.5, t=4") {
    const ModelParams p(2, 1, 1, 0.5);
    const std::vector<std::int64_t> times{4};
    const Trajectory traj = simulate(p, 4, times, seed);
    testing::NaiveUrns naive(2, 1, 1, 0.5);
    Rng rng(seed);
    for (int i = 0; i < 4; ++i) naive.step(rng);
    for (std::size_t j = 0; j < 2; ++j) CHECK(traj.fraction(0, j) == naive.z(j));
    CHECK(traj.mean_fraction(0) == doctest::Approx(0.5 * (naive.z(0) + naive.z(1))).epsilon(1e-15));
  }
  SUBCASE("longer run, several urns, every recorded row") {
    const ModelParams p(5, 2, 3, 0.8);
    const std::vector<std::int64_t> times{1, 2, 3, 10, 50, 300};
    const Trajectory traj = simulate(p, 300, times, seed);
    testing::NaiveUrns naive(5, 2, 3, 0.8);
    Rng rng(seed);
    std::size_t row = 0;
    for (std::int64_t t = 1; t <= 300; ++t) {
      naive.step(rng);
      if (t == times[row]) {
        for (std::size_t j = 0; j < 5; ++j) CHECK(traj.fraction(row, j) == naive.z(j));
        ++row;
      }
    }
  }
}

TEST_CASE("trajectory rows satisfy the averaging and zero-sum identities") {
  const ModelParams p(4, 1, 1, 0.3);
  const auto grid = geometric_grid(2000, 10);
  const Trajectory traj = simulate(p, 2000, grid, 42);
  for (std::size_t row = 0; row < traj.rows(); ++row) {
    double zsum = 0.0, dsum = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      zsum += traj.fraction(row, j);
      dsum += traj.gap(row, j);
      CHECK(traj.fraction(row, j) > 0.0);
      CHECK(traj.fraction(row, j) < 1.0);
    }
    CHECK(std::fabs(traj.mean_fraction(row) - zsum / 4.0) <= 1e-12);
    CHECK(std::fabs(dsum) <= 1e-12);
  }
}

TEST_CASE("simulate argument errors") {
  const ModelParams p(2, 1, 1, 0.5);
  const std::vector<std::int64_t> times{1, 5};
  CHECK_THROWS_AS(simulate(p, 4, times, 1), ArgumentError);
  const std::vector<std::int64_t> unsorted{5, 1};
  CHECK_THROWS_AS(simulate(p, 10, unsorted, 1), ArgumentError);
  const std::vector<std::int64_t> repeated{1, 1};
  CHECK_THROWS_AS(simulate(p, 10, repeated, 1), ArgumentError);
  const std::vector<std::int64_t> none;
  CHECK_THROWS_AS(simulate_ensemble(p, 1, 10, none, 1), ArgumentError);
  CHECK_THROWS_AS(simulate_ensemble(p, 0, 10, times, 1), ArgumentError);
  const Trajectory traj = simulate(p, 5, times, 1);
  CHECK_THROWS_AS((void)traj.row_of(3), PreconditionError);
}

TEST_CASE("ensembles: seed derivation and determinism") {
  const ModelParams p(3, 1, 2, 0.55);
  const auto grid = geometric_grid(500, 20);

  SUBCASE("M = 1 is simulate with the derived seed") {
    const Ensemble e = simulate_ensemble(p, 1, 500, grid, 2024);
    CHECK(e.trajectories[0] == simulate(p, 500, grid, derive_seed(2024, 0)));
  }
  SUBCASE("distinct replicas get distinct streams") {
    const Ensemble e = simulate_ensemble(p, 2, 500, grid, 2024);
    CHECK(e.trajectories[0].seed() != e.trajectories[1].seed());
    CHECK_FALSE(e.trajectories[0] == e.trajectories[1]);
  }
  SUBCASE("thread count and block offsets do not change the result") {
    const Ensemble serial = simulate_ensemble(p, 40, 500, grid, 31337, {1, 0});
    const Ensemble parallel = simulate_ensemble(p, 40, 500, grid, 31337, {8, 0});
    CHECK(serial.trajectories == parallel.trajectories);
    const Ensemble tail = simulate_ensemble(p, 15, 500, grid, 31337, {3, 25});
    for (std::size_t i = 0; i < 15; ++i) CHECK(tail.trajectories[i] == serial.trajectories[25 + i]);
  }
  SUBCASE("derive_seed is injective on small indices") {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t r = 0; r < 10000; ++r) seeds.push_back(derive_seed(0, r));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
  }
}

TEST_CASE("independent urns: variance of Z_t matches the classical Polya law") {
  const ModelParams p(2, 1, 1, 0.0);
  const std::vector<std::int64_t> times{100};
  const Ensemble e = simulate_ensemble(p, 10000, 100, times, 8675309);
  const testing::UniformPolyaLaw law{100};
  for (std::size_t j = 0; j < 2; ++j) {
    std::vector<double> z;
    for (const auto& traj : e.trajectories) z.push_back(traj.fraction(0, j));
    const double var = sample_variance(z);
    const double target = testing::polya_variance(100);
    CHECK(law.moment(2) == doctest::Approx(target).epsilon(1e-12));
    const double se = std::sqrt((law.moment(4) - target * target) / static_cast<double>(z.size()));
    CHECK(std::fabs(var - target) <= 3.0 * se);
    const double mean_se = std::sqrt(target / static_cast<double>(z.size()));
    CHECK(std::fabs(sample_mean(z) - 0.5) <= 4.0 * mean_se);
  }
}

TEST_CASE("the mean fraction is a martingale across an ensemble") {
  const ModelParams p(3, 2, 3, 0.45);
  const auto grid = geometric_grid(3000, 8);
  const Ensemble e = simulate_ensemble(p, 3000, 3000, grid, 1234);
  for (std::size_t row = 1; row < grid.size(); ++row) {
    std::vector<double> z;
    for (const auto& traj : e.trajectories) z.push_back(traj.mean_fraction(row));
    const double se = std::sqrt(sample_variance(z) / static_cast<double>(z.size()));
    CHECK(std::fabs(sample_mean(z) - 0.4) <= 4.0 * se);
  }
}

TEST_CASE("urns are exchangeable from a symmetric start") {
  const ModelParams p(3, 1, 1, 0.5);
  const std::vector<std::int64_t> times{200};
  const Ensemble e = simulate_ensemble(p, 2000, 200, times, 4242);
  std::vector<std::vector<double>> z(3);
  for (const auto& traj : e.trajectories)
    for (std::size_t j = 0; j < 3; ++j) z[j].push_back(traj.fraction(0, j));
  for (std::size_t j = 1; j < 3; ++j) CHECK(ks_two_sample(z[0], z[j]).p_value >= 0.001);
}

TEST_CASE("geometric grid") {
  const auto grid = geometric_grid(100000, 40);
  CHECK(grid.front() == 0);
  CHECK(grid.back() == 100000);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(std::adjacent_find(grid.begin(), grid.end()) == grid.end());
  // About 40 points per decade once rounding stops merging points.
  const auto in_decade = std::count_if(grid.begin(), grid.end(), [](auto t) { return t > 10000 && t <= 100000; });
  CHECK(in_decade == 40);
  const std::vector<std::int64_t> extra{777};
  const auto with_extra = geometric_grid(1000, 5, extra);
  CHECK(std::binary_search(with_extra.begin(), with_extra.end(), 777));
  CHECK_THROWS_AS(geometric_grid(10, 5, std::vector<std::int64_t>{11}), ArgumentError);
}
