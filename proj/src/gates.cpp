#include "polya/gates.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "polya/error.hpp"
#include "polya/fluctuations.hpp"
#include "polya/numerics.hpp"
#include "polya/rng.hpp"
#include "polya/stats.hpp"

namespace polya {
namespace {

using nlohmann::ordered_json;

GateResult make(std::string_view gate, std::string_view statistic, double value,
                std::optional<double> lower, std::optional<double> upper) {
  GateResult r;
  r.gate = gate;
  r.statistic = statistic;
  r.value = value;
  r.lower = lower;
  r.upper = upper;
  r.pass = std::isfinite(value) && (!lower || value >= *lower) && (!upper || value <= *upper);
  return r;
}

void dump_samples(const GateOutput* output, std::string_view gate, const std::vector<double>& values) {
  if (!output) return;
  const auto path = output->dir / ("samples_" + std::string(gate) + "_" + output->suffix + ".csv");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write sample dump '" + path.string() + "'");
  out << "replica,value\n";
  char buf[40];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out << i << ',' << buf << '\n';
  }
}

std::vector<GateResult> scaling(const ExperimentConfig& c, const Ensemble& e) {
  const Regime regime = regime_of(c.alpha);
  const ScalingFit fit = fit_scaling_exponent(e, static_cast<std::size_t>(c.urn),
                                              {c.scaling_t_lo, c.scaling_t_hi}, regime);
  const double tol = regime == Regime::critical ? thresholds::kCriticalSlopeTolerance
                                                : thresholds::kScalingSlopeTolerance;
  GateResult r = make("scaling", "slope", fit.slope, fit.expected_slope - tol, fit.expected_slope + tol);
  r.parameters = {{"alpha", c.alpha}, {"urn", c.urn}, {"t_lo", c.scaling_t_lo},
                  {"t_hi", c.scaling_t_hi}, {"regime", std::string(to_string(regime))}};
  r.details = {{"slope_stderr", fit.slope_stderr}, {"intercept", fit.intercept},
               {"points", fit.points}, {"expected_slope", fit.expected_slope}};
  return {r};
}

std::vector<GateResult> martingale(const ExperimentConfig& c, const Ensemble& e) {
  const double target = e.params.initial_fraction();
  double worst = 0.0;
  std::int64_t worst_t = 0;
  std::size_t checked = 0;
  for (std::int64_t t : e.trajectories.front().record_times()) {
    if (t < 1 || t > c.martingale_t_max) continue;
    std::vector<double> z;
    z.reserve(e.size());
    for (const auto& traj : e.trajectories) z.push_back(traj.mean_fraction(traj.row_of(t)));
    const double se = std::sqrt(sample_variance(z) / static_cast<double>(z.size()));
    if (se == 0.0) continue;
    const double score = std::fabs(sample_mean(z) - target) / se;
    ++checked;
    if (score > worst) {
      worst = score;
      worst_t = t;
    }
  }
  GateResult r = make("martingale", "max_abs_zscore", worst, std::nullopt,
                      thresholds::kMartingaleStandardErrors);
  r.parameters = {{"t_max", c.martingale_t_max}, {"target", target}};
  r.details = {{"worst_t", worst_t}, {"times_checked", checked}};
  return {r};
}

std::vector<GateResult> clt(std::string_view gate, PivotKind kind, const ExperimentConfig& c,
                            const Ensemble& e, const GateOutput* output, bool control) {
  CltOptions options;
  options.proxy_ratio = c.proxy_ratio;
  options.omit_interaction_factor = control;
  const CltSample sample = clt_sample(e, kind, c.clt_t, c.clt_T, static_cast<std::size_t>(c.urn), options);
  const KsResult ks = ks_test(sample.values);
  const double critical = thresholds::kKsCriticalNumerator / std::sqrt(static_cast<double>(e.size()));
  // The control statistic is deliberately mis-normalized and must be rejected.
  GateResult r = control ? make(gate, "ks_statistic", ks.statistic, critical, std::nullopt)
                         : make(gate, "ks_statistic", ks.statistic, std::nullopt, critical);
  r.parameters = {{"pivot", std::string(to_string(kind))}, {"t", c.clt_t}, {"urn", c.urn},
                  {"alpha", c.alpha}, {"replicas", e.size()}};
  if (kind == PivotKind::S1 || kind == PivotKind::S4) r.parameters["T"] = c.clt_T;
  r.details = {{"p_value", ks.p_value}, {"mean", sample_mean(sample.values)},
               {"variance", sample_variance(sample.values)}};
  if (kind == PivotKind::S1)
    r.details["boundary_fraction_at_T"] = boundary_fraction(e, c.clt_T, thresholds::kBoundaryEpsilon);
  dump_samples(output, gate, sample.values);
  return {r};
}

std::vector<GateResult> sub_limit(const ExperimentConfig& c, const Ensemble& e) {
  const auto d = limit_diagnostics_sub(e, static_cast<std::size_t>(c.urn), c.sub_t1, c.sub_t2);
  const ordered_json params = {{"alpha", c.alpha}, {"urn", c.urn}, {"t1", c.sub_t1}, {"t2", c.sub_t2}};
  GateResult corr = make("sub-limit", "corr", d.corr, thresholds::kSubCorrelation, std::nullopt);
  GateResult sd = make("sub-limit", "std", std::sqrt(d.var_hat), thresholds::kSubStd, std::nullopt);
  corr.parameters = sd.parameters = params;
  corr.details = sd.details = {{"var_hat", d.var_hat}, {"mean_abs", d.mean_abs}};
  return {corr, sd};
}

std::vector<GateResult> covariance(const ExperimentConfig& c, const Ensemble& e) {
  const SquareMatrix cov = covariance_structure(e, c.cov_t);
  const SquareMatrix raw = raw_gap_covariance(e, c.cov_t);
  const double n = static_cast<double>(c.N);
  double diag = 0.0, off = 0.0, rows = 0.0;
  ordered_json matrix = ordered_json::array();
  for (std::size_t i = 0; i < cov.n; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < cov.n; ++j) {
      row.push_back(cov(i, j));
      if (i == j)
        diag = std::max(diag, std::fabs(cov(i, j) - (1.0 - 1.0 / n)));
      else
        off = std::max(off, std::fabs(cov(i, j) + 1.0 / n));
    }
    matrix.push_back(row);
    rows = std::max(rows, std::fabs(raw.row_sum(i)));
  }
  const ordered_json params = {{"alpha", c.alpha}, {"N", c.N}, {"t", c.cov_t}, {"replicas", e.size()}};
  GateResult r1 = make("covariance", "max_diagonal_deviation", diag, std::nullopt,
                       thresholds::kCovDiagonalTolerance);
  GateResult r2 = make("covariance", "max_off_diagonal_deviation", off, std::nullopt,
                       thresholds::kCovOffDiagonalTolerance);
  GateResult r3 = make("covariance", "max_raw_row_sum", rows, std::nullopt, thresholds::kRawRowSum);
  r1.parameters = r2.parameters = r3.parameters = params;
  r1.details = r2.details = {{"normalized_covariance", matrix}};
  return {r1, r2, r3};
}

std::vector<GateResult> ci_coverage(const ExperimentConfig& c, const Ensemble& e) {
  std::size_t covered = 0;
  double width = 0.0;
  for (const auto& traj : e.trajectories) {
    const IntervalEstimate ci = z_confidence_interval(traj, c.ci_t, c.ci_level);
    width += ci.half_width;
    if (ci.covers(traj.mean_fraction(traj.row_of(c.ci_T)))) ++covered;
  }
  const double m = static_cast<double>(e.size());
  GateResult r = make("ci-coverage", "coverage", static_cast<double>(covered) / m,
                      c.ci_level - thresholds::kCoverageTolerance,
                      c.ci_level + thresholds::kCoverageTolerance);
  r.parameters = {{"alpha", c.alpha}, {"t", c.ci_t}, {"T", c.ci_T}, {"level", c.ci_level},
                  {"replicas", e.size()}};
  r.details = {{"mean_half_width", width / m}};
  return {r};
}

std::vector<GateResult> alpha_est(const ExperimentConfig& c, const Ensemble& e) {
  const AlphaEstimate est = estimate_alpha(e, c.alpha_t, static_cast<std::size_t>(c.urn));
  const AlphaTest test = test_alpha(est, c.alpha, 0.95);
  GateResult r = make("alpha-est", "alpha_hat", est.alpha_hat, c.alpha - thresholds::kAlphaTolerance,
                      c.alpha + thresholds::kAlphaTolerance);
  r.parameters = {{"alpha", c.alpha}, {"t", c.alpha_t}, {"urn", c.urn}, {"replicas", e.size()}};
  r.details = {{"standard_error", est.standard_error}, {"variance", est.variance},
               {"test_statistic", test.statistic}, {"test_p_value", test.p_value},
               {"test_rejects_at_95", test.reject}};
  return {r};
}

std::vector<GateResult> coefficient_gate(const ExperimentConfig& c) {
  std::vector<GateResult> out;
  const std::int64_t m = c.a + c.b;
  for (double a : c.coef_alphas) {
    GateResult r = make("coefficients", "dyadic_ratio_deviation", dyadic_ratio_deviation(a, m, c.coef_t),
                        std::nullopt, thresholds::kDyadicRatio);
    r.parameters = {{"alpha", a}, {"m", m}, {"t", c.coef_t}};
    out.push_back(r);
  }
  return out;
}

}  // namespace

double recursion_max_relative_error(std::int64_t instances, std::uint64_t seed) {
  double worst = 0.0;
  for (std::int64_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const std::int64_t t = 1 + static_cast<std::int64_t>(rng.next() % 10000);
    std::vector<double> f(static_cast<std::size_t>(t)), g(static_cast<std::size_t>(t));
    for (std::int64_t k = 0; k < t; ++k) {
      f[static_cast<std::size_t>(k)] = 1.0 - 0.5 * rng.uniform();
      g[static_cast<std::size_t>(k)] = 2.0 * rng.uniform() - 1.0;
    }
    const auto fk = [&](std::int64_t k) { return f[static_cast<std::size_t>(k)]; };
    const auto gk = [&](std::int64_t k) { return g[static_cast<std::size_t>(k)]; };
    const double closed = solve_linear_recursion(fk, gk, t);
    const double direct = iterate_linear_recursion(fk, gk, t);
    worst = std::max(worst, std::fabs(closed - direct) / std::fabs(direct));
  }
  return worst;
}

ordered_json GateResult::to_json(const std::string& command) const {
  ordered_json j;
  j["gate"] = gate;
  j["statistic"] = statistic;
  j["parameters"] = parameters;
  j["value"] = value;
  j["threshold"] = {{"lower", lower ? ordered_json(*lower) : ordered_json(nullptr)},
                    {"upper", upper ? ordered_json(*upper) : ordered_json(nullptr)}};
  j["pass"] = pass;
  j["details"] = details;
  j["command"] = command;
  return j;
}

bool gate_needs_ensemble(std::string_view gate) {
  return gate != "coefficients" && gate != "recursion";
}

std::vector<GateResult> run_gate(std::string_view gate, const ExperimentConfig& config,
                                 const Ensemble* ensemble, const GateOutput* output) {
  if (gate_needs_ensemble(gate) && (ensemble == nullptr || ensemble->size() == 0))
    throw ArgumentError("gate " + std::string(gate) + " needs simulated trajectories");
  if (gate == "scaling") return scaling(config, *ensemble);
  if (gate == "martingale") return martingale(config, *ensemble);
  if (gate == "clt-s1") return clt(gate, PivotKind::S1, config, *ensemble, output, false);
  if (gate == "clt-s2") return clt(gate, PivotKind::S2, config, *ensemble, output, false);
  if (gate == "clt-s2-control") return clt(gate, PivotKind::S2, config, *ensemble, output, true);
  if (gate == "clt-s3") return clt(gate, PivotKind::S3, config, *ensemble, output, false);
  if (gate == "clt-s4") return clt(gate, PivotKind::S4, config, *ensemble, output, false);
  if (gate == "sub-limit") return sub_limit(config, *ensemble);
  if (gate == "covariance") return covariance(config, *ensemble);
  if (gate == "ci-coverage") return ci_coverage(config, *ensemble);
  if (gate == "alpha-est") return alpha_est(config, *ensemble);
  if (gate == "coefficients") return coefficient_gate(config);
  if (gate == "recursion") {
    const double err = recursion_max_relative_error(config.recursion_instances, config.recursion_seed);
    GateResult r = make("recursion", "max_relative_error", err, std::nullopt,
                        thresholds::kRecursionRelativeError);
    r.parameters = {{"instances", config.recursion_instances}, {"seed", config.recursion_seed}};
    return {r};
  }
  throw ArgumentError("unknown gate '" + std::string(gate) + "'");
}

}  // namespace polya
