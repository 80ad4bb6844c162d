#include <doctest.h>

#include <cmath>
#include <vector>

#include "polya/error.hpp"
#include "polya/fluctuations.hpp"
#include "polya/simulate.hpp"
#include "polya/stats.hpp"
#include "support/oracles.hpp"

using namespace polya;

TEST_CASE("regime classification") {
  CHECK(regime_of(0.0) == Regime::sub);
  CHECK(regime_of(0.49) == Regime::sub);
  CHECK(regime_of(0.5) == Regime::critical);
  CHECK(regime_of(0.51) == Regime::super);
  CHECK(regime_of(1.0) == Regime::super);
  CHECK(to_string(Regime::critical) == "critical");
  CHECK(to_string(PivotKind::S3) == "S3");
}

TEST_CASE("independent urns: mean square gap matches t / (24 (t + 2))") {
  const ModelParams p(2, 1, 1, 0.0);
  const auto grid = geometric_grid(1000, 5);
  const Ensemble e = simulate_ensemble(p, 4000, 1000, grid, 77);
  for (std::int64_t t : grid) {
    if (t == 0) continue;
    const auto msg = mean_square_gap(e, t, 0);
    const double exact = static_cast<double>(t) / (24.0 * static_cast<double>(t + 2));
    CHECK(std::fabs(msg.mean - exact) <= 4.0 * msg.stderr_of_mean);
  }
}

TEST_CASE("scaling fits") {
  const auto grid = geometric_grid(3000, 40);
  SUBCASE("super-critical slope near -1") {
    const Ensemble e = simulate_ensemble(ModelParams(2, 1, 1, 0.8), 3000, 3000, grid, 1);
    const ScalingFit fit = fit_scaling_exponent(e, 0, {100, 3000}, Regime::super);
    CHECK(fit.expected_slope == -1.0);
    CHECK(fit.points >= kMinFitPoints);
    CHECK(std::fabs(fit.slope + 1.0) <= 0.15);
    CHECK(fit.slope_stderr > 0.0);
  }
  SUBCASE("sub-critical slope near -2 alpha and regimes are distinguishable") {
    const Ensemble sub = simulate_ensemble(ModelParams(2, 1, 1, 0.25), 3000, 3000, grid, 2);
    const Ensemble sup = simulate_ensemble(ModelParams(2, 1, 1, 0.8), 3000, 3000, grid, 2);
    const ScalingFit fs = fit_scaling_exponent(sub, 0, {100, 3000}, Regime::sub);
    const ScalingFit fp = fit_scaling_exponent(sup, 0, {100, 3000}, Regime::super);
    CHECK(fs.expected_slope == -0.5);
    CHECK(std::fabs(fs.slope + 0.5) <= 0.15);
    CHECK(fs.slope - fp.slope >= 0.3);
  }
  SUBCASE("preconditions") {
    const Ensemble e = simulate_ensemble(ModelParams(2, 1, 1, 0.8), 3000, 3000, grid, 3);
    CHECK_THROWS_AS(fit_scaling_exponent(e, 0, {100, 3000}, Regime::sub), ArgumentError);
    CHECK_THROWS_AS(fit_scaling_exponent(e, 0, {500, 100}, Regime::super), PreconditionError);
    CHECK_THROWS_AS(fit_scaling_exponent(e, 0, {1000, 1200}, Regime::super), PreconditionError);
    CHECK_THROWS_AS(fit_scaling_exponent(e, 5, {100, 3000}, Regime::super), ArgumentError);
    const Ensemble small = simulate_ensemble(ModelParams(2, 1, 1, 0.8), 50, 3000, grid, 3);
    CHECK_THROWS_AS(fit_scaling_exponent(small, 0, {100, 3000}, Regime::super), PreconditionError);
  }
}

TEST_CASE("pivot formulas") {
  const std::vector<std::int64_t> times{100, 10000};
  const Ensemble e = simulate_ensemble(ModelParams(2, 1, 1, 1.0), 20, 10000, times, 9);
  SUBCASE("S2 at alpha = 1 is sqrt(t) D / sqrt((1 - 1/N) U)") {
    const CltSample s = clt_sample(e, PivotKind::S2, 100, 0, 1);
    REQUIRE(s.values.size() == 20);
    for (std::size_t r = 0; r < 20; ++r) {
      const auto& tr = e.trajectories[r];
      const double z = tr.mean_fraction(0);
      const double expected = 10.0 * tr.gap(0, 1) / std::sqrt(0.5 * (z - z * z));
      CHECK(s.values[r] == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  SUBCASE("S1 and S4 use the proxy horizon") {
    const CltSample s1 = clt_sample(e, PivotKind::S1, 100, 10000, 0);
    const CltSample s4 = clt_sample(e, PivotKind::S4, 100, 10000, 0);
    for (std::size_t r = 0; r < 20; ++r) {
      const auto& tr = e.trajectories[r];
      const double z = tr.mean_fraction(0), u = z - z * z, zt = tr.mean_fraction(1);
      CHECK(s1.values[r] == doctest::Approx(std::sqrt(200.0) * (z - zt) / std::sqrt(u)).epsilon(1e-13));
      CHECK(s4.values[r] ==
            doctest::Approx(10.0 * (tr.fraction(0, 0) - zt) / std::sqrt(u)).epsilon(1e-13));
    }
  }
  SUBCASE("omitting the interaction factor rescales S2") {
    const Ensemble e8 = simulate_ensemble(ModelParams(2, 1, 1, 0.8), 20, 10000, times, 9);
    const CltSample good = clt_sample(e8, PivotKind::S2, 100, 0, 0);
    const CltSample bad = clt_sample(e8, PivotKind::S2, 100, 0, 0, {100.0, true});
    for (std::size_t r = 0; r < 20; ++r)
      CHECK(bad.values[r] == doctest::Approx(good.values[r] / std::sqrt(0.6)).epsilon(1e-13));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(clt_sample(e, PivotKind::S3, 100, 0, 0), PreconditionError);
    CHECK_THROWS_AS(clt_sample(e, PivotKind::S1, 101, 10000, 0), PreconditionError);
    const Ensemble half = simulate_ensemble(ModelParams(2, 1, 1, 0.5), 5, 10000, times, 9);
    CHECK_THROWS_AS(clt_sample(half, PivotKind::S2, 100, 0, 0), PreconditionError);
    CHECK_THROWS_AS(clt_sample(half, PivotKind::S4, 100, 10000, 0), PreconditionError);
    CHECK_NOTHROW(clt_sample(half, PivotKind::S3, 100, 0, 0));
    CHECK_NOTHROW(clt_sample(half, PivotKind::S1, 100, 10000, 0));
    CHECK_THROWS_AS(clt_sample(half, PivotKind::S1, 100, 5000, 0), PreconditionError);
  }
}

TEST_CASE("compensator increments average to zero across replicas") {
  const ModelParams p(3, 1, 2, 0.6);
  const std::vector<std::int64_t> times{10, 100, 1000};
  const Ensemble e = simulate_ensemble(p, 4000, 1000, times, 21);
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t row = 1; row < times.size(); ++row) {
      std::vector<double> inc;
      for (const auto& tr : e.trajectories) inc.push_back(tr.compensator(row, j) - tr.compensator(row - 1, j));
      const double se = std::sqrt(sample_variance(inc) / static_cast<double>(inc.size()));
      CHECK(std::fabs(sample_mean(inc)) <= 4.0 * se);
    }
  }
}

TEST_CASE("sub-critical diagnostics") {
  const std::vector<std::int64_t> times{2000, 4000};
  SUBCASE("alpha = 0 control: classical limits give high correlation") {
    const Ensemble e = simulate_ensemble(ModelParams(2, 1, 1, 0.0), 500, 4000, times, 4);
    const auto d = limit_diagnostics_sub(e, 0, 2000, 4000);
    CHECK(d.corr > 0.95);
    CHECK(d.var_hat > 0.0);
    CHECK(d.mean_abs > 0.0);
  }
  SUBCASE("preconditions") {
    const Ensemble e = simulate_ensemble(ModelParams(2, 1, 1, 0.5), 10, 4000, times, 4);
    CHECK_THROWS_AS(limit_diagnostics_sub(e, 0, 2000, 4000), PreconditionError);
    const Ensemble s = simulate_ensemble(ModelParams(2, 1, 1, 0.25), 10, 4000, times, 4);
    CHECK_THROWS_AS(limit_diagnostics_sub(s, 0, 2000, 3000), PreconditionError);
  }
}

TEST_CASE("covariance of the gap vector") {
  const std::vector<std::int64_t> times{500};
  const Ensemble e = simulate_ensemble(ModelParams(3, 1, 1, 0.8), 2000, 500, times, 6);
  const SquareMatrix raw = raw_gap_covariance(e, 500);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::fabs(raw.row_sum(i)) <= 1e-12);
  const SquareMatrix cov = covariance_structure(e, 500);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(cov(i, i) - 2.0 / 3.0) <= 0.1);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(cov(i, j) == cov(j, i));
      if (i != j) CHECK(std::fabs(cov(i, j) + 1.0 / 3.0) <= 0.08);
    }
  }
  const Ensemble few = simulate_ensemble(ModelParams(3, 1, 1, 0.8), 100, 500, times, 6);
  CHECK_THROWS_AS(covariance_structure(few, 500), PreconditionError);
  const Ensemble sub = simulate_ensemble(ModelParams(3, 1, 1, 0.4), 2000, 500, times, 6);
  CHECK_THROWS_AS(covariance_structure(sub, 500), PreconditionError);
  const double frac = boundary_fraction(e, 500, 0.01);
  CHECK(frac >= 0.0);
  CHECK(frac < 1.0);
}
