#include "polya/fluctuations.hpp"

#include <cmath>
#include <string>

#include "polya/error.hpp"
#include "polya/stats.hpp"
#include "polya/summation.hpp"

namespace polya {
namespace {

void require_urn(const Ensemble& ensemble, std::size_t urn) {
  if (urn >= ensemble.params.urn_count())
    throw ArgumentError("urn index " + std::to_string(urn) + " out of range for N=" +
                        std::to_string(ensemble.params.urns()));
}

void require_replicas(const Ensemble& ensemble, std::size_t minimum, const char* what) {
  if (ensemble.size() < minimum)
    throw PreconditionError(std::string(what) + " needs at least " + std::to_string(minimum) +
                            " replicas, got " + std::to_string(ensemble.size()));
}

double u_of(double z) noexcept { return z - z * z; }

SquareMatrix sample_covariance(const std::vector<std::vector<double>>& vectors, std::size_t n) {
  const std::size_t m = vectors.size();
  std::vector<double> mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum s;
    for (const auto& v : vectors) s += v[i];
    mean[i] = s.value() / static_cast<double>(m);
  }
  SquareMatrix cov(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      CompensatedSum s;
      for (const auto& v : vectors) s += (v[i] - mean[i]) * (v[j] - mean[j]);
      cov(i, j) = cov(j, i) = s.value() / static_cast<double>(m - 1);
    }
  }
  return cov;
}

}  // namespace

Regime regime_of(double alpha) noexcept {
  if (alpha < 0.5) return Regime::sub;
  if (alpha == 0.5) return Regime::critical;
  return Regime::super;
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::sub: return "sub";
    case Regime::critical: return "critical";
    case Regime::super: return "super";
  }
  return "unknown";
}

std::string_view to_string(PivotKind kind) noexcept {
  switch (kind) {
    case PivotKind::S1: return "S1";
    case PivotKind::S2: return "S2";
    case PivotKind::S3: return "S3";
    case PivotKind::S4: return "S4";
  }
  return "unknown";
}

MeanSquareGap mean_square_gap(const Ensemble& ensemble, std::int64_t t, std::size_t urn) {
  require_urn(ensemble, urn);
  require_replicas(ensemble, 2, "mean_square_gap");
  std::vector<double> sq;
  sq.reserve(ensemble.size());
  for (const auto& traj : ensemble.trajectories) {
    const double d = traj.gap(traj.row_of(t), urn);
    sq.push_back(d * d);
  }
  const double mean = sample_mean(sq);
  return {mean, std::sqrt(sample_variance(sq) / static_cast<double>(sq.size()))};
}

ScalingFit fit_scaling_exponent(const Ensemble& ensemble, std::size_t urn, FitWindow window,
                                Regime regime) {
  require_urn(ensemble, urn);
  require_replicas(ensemble, 2, "fit_scaling_exponent");
  const double alpha = ensemble.params.alpha();
  if (regime != regime_of(alpha))
    throw ArgumentError("regime " + std::string(to_string(regime)) + " does not match alpha=" +
                        std::to_string(alpha));
  const std::int64_t min_lo = regime == Regime::critical ? 2 : 1;
  if (window.lo < min_lo || window.hi <= window.lo)
    throw PreconditionError("degenerate fit window [" + std::to_string(window.lo) + ", " +
                            std::to_string(window.hi) + "]");

  std::vector<double> xs, ys;
  for (std::int64_t t : ensemble.trajectories.front().record_times()) {
    if (t < window.lo || t > window.hi) continue;
    const MeanSquareGap msg = mean_square_gap(ensemble, t, urn);
    if (msg.mean == 0.0)
      throw InvariantViolation("zero mean-square gap at t=" + std::to_string(t));
    if (msg.stderr_of_mean / msg.mean >= kMaxRelativeStderr)
      throw PreconditionError("relative standard error " + std::to_string(msg.stderr_of_mean / msg.mean) +
                              " at t=" + std::to_string(t) + " exceeds " +
                              std::to_string(kMaxRelativeStderr) + "; increase the replica count");
    const double td = static_cast<double>(t);
    xs.push_back(td);
    ys.push_back(regime == Regime::critical ? msg.mean / std::log(td) : msg.mean);
  }
  if (xs.size() < kMinFitPoints)
    throw PreconditionError("fit window holds " + std::to_string(xs.size()) +
                            " recorded times, need at least " + std::to_string(kMinFitPoints));

  const LinearFit fit = ols_loglog(xs, ys);
  ScalingFit out;
  out.alpha = alpha;
  out.urn = urn;
  out.window = window;
  out.slope = fit.slope;
  out.slope_stderr = fit.slope_stderr;
  out.intercept = fit.intercept;
  out.regime = regime;
  out.points = xs.size();
  out.expected_slope = regime == Regime::sub ? -2.0 * alpha : -1.0;
  return out;
}

CltSample clt_sample(const Ensemble& ensemble, PivotKind kind, std::int64_t t,
                     std::int64_t proxy_t, std::size_t urn, const CltOptions& options) {
  require_urn(ensemble, urn);
  require_replicas(ensemble, 1, "clt_sample");
  const double alpha = ensemble.params.alpha();
  const double n = static_cast<double>(ensemble.params.urns());
  const bool uses_proxy = kind == PivotKind::S1 || kind == PivotKind::S4;

  if ((kind == PivotKind::S2 || kind == PivotKind::S4) && !(alpha > 0.5))
    throw PreconditionError(std::string(to_string(kind)) + " needs alpha > 1/2, got " +
                            std::to_string(alpha));
  if (kind == PivotKind::S3 && alpha != 0.5)
    throw PreconditionError("S3 needs alpha = 1/2, got " + std::to_string(alpha));
  if (t < (kind == PivotKind::S3 ? 2 : 1))
    throw PreconditionError("pivot time t=" + std::to_string(t) + " too small");
  if (uses_proxy && static_cast<double>(proxy_t) < options.proxy_ratio * static_cast<double>(t))
    throw PreconditionError("proxy horizon T=" + std::to_string(proxy_t) + " must be at least " +
                            std::to_string(options.proxy_ratio) + " * t");

  const double td = static_cast<double>(t);
  const double interaction = options.omit_interaction_factor ? 1.0 : 2.0 * alpha - 1.0;

  CltSample sample{kind, t, proxy_t, {}};
  sample.values.reserve(ensemble.size());
  for (const auto& traj : ensemble.trajectories) {
    const std::size_t row = traj.row_of(t);
    const double z = traj.mean_fraction(row);
    const double u = u_of(z);
    const double z_proxy = uses_proxy ? traj.mean_fraction(traj.row_of(proxy_t)) : 0.0;
    double value = 0.0;
    switch (kind) {
      case PivotKind::S1:
        value = std::sqrt(n * td) * (z - z_proxy) / std::sqrt(u);
        break;
      case PivotKind::S2:
        value = std::sqrt(interaction * td) * traj.gap(row, urn) / std::sqrt((1.0 - 1.0 / n) * u);
        break;
      case PivotKind::S3:
        value = std::sqrt(td / std::log(td)) * traj.gap(row, urn) / std::sqrt((1.0 - 1.0 / n) * u);
        break;
      case PivotKind::S4:
        value = std::sqrt(td) * (traj.fraction(row, urn) - z_proxy) /
                std::sqrt((1.0 / n + (1.0 - 1.0 / n) / interaction) * u);
        break;
    }
    sample.values.push_back(value);
  }
  return sample;
}

SubcriticalDiagnostics limit_diagnostics_sub(const Ensemble& ensemble, std::size_t urn,
                                             std::int64_t t1, std::int64_t t2) {
  require_urn(ensemble, urn);
  require_replicas(ensemble, 2, "limit_diagnostics_sub");
  const double alpha = ensemble.params.alpha();
  if (!(alpha < 0.5))
    throw PreconditionError("sub-critical diagnostics need alpha < 1/2, got " + std::to_string(alpha));
  if (t1 < 1 || t2 < 2 * t1)
    throw PreconditionError("need t1 >= 1 and t2 >= 2 t1, got t1=" + std::to_string(t1) +
                            ", t2=" + std::to_string(t2));
  const double s1 = std::pow(static_cast<double>(t1), alpha);
  const double s2 = std::pow(static_cast<double>(t2), alpha);
  std::vector<double> early, late, late_abs;
  for (const auto& traj : ensemble.trajectories) {
    early.push_back(s1 * traj.gap(traj.row_of(t1), urn));
    late.push_back(s2 * traj.gap(traj.row_of(t2), urn));
    late_abs.push_back(std::fabs(late.back()));
  }
  return {pearson_correlation(early, late), sample_variance(late), sample_mean(late_abs)};
}

double SquareMatrix::row_sum(std::size_t i) const noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += (*this)(i, j);
  return s;
}

SquareMatrix covariance_structure(const Ensemble& ensemble, std::int64_t t) {
  const double alpha = ensemble.params.alpha();
  if (!(alpha > 0.5))
    throw PreconditionError("covariance structure needs alpha > 1/2, got " + std::to_string(alpha));
  require_replicas(ensemble, 2000, "covariance_structure");
  if (t < 1) throw PreconditionError("covariance structure needs t >= 1");
  const std::size_t n = ensemble.params.urn_count();
  const double scale = std::sqrt((2.0 * alpha - 1.0) * static_cast<double>(t));
  std::vector<std::vector<double>> vectors;
  vectors.reserve(ensemble.size());
  for (const auto& traj : ensemble.trajectories) {
    const std::size_t row = traj.row_of(t);
    const double norm = scale / std::sqrt(u_of(traj.mean_fraction(row)));
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = norm * traj.gap(row, j);
    vectors.push_back(std::move(v));
  }
  return sample_covariance(vectors, n);
}

SquareMatrix raw_gap_covariance(const Ensemble& ensemble, std::int64_t t) {
  require_replicas(ensemble, 2, "raw_gap_covariance");
  const std::size_t n = ensemble.params.urn_count();
  std::vector<std::vector<double>> vectors;
  vectors.reserve(ensemble.size());
  for (const auto& traj : ensemble.trajectories) {
    const auto gaps = traj.gaps(traj.row_of(t));
    vectors.emplace_back(gaps.begin(), gaps.end());
  }
  return sample_covariance(vectors, n);
}

double boundary_fraction(const Ensemble& ensemble, std::int64_t t, double eps) {
  require_replicas(ensemble, 1, "boundary_fraction");
  std::size_t hits = 0;
  for (const auto& traj : ensemble.trajectories) {
    const double z = traj.mean_fraction(traj.row_of(t));
    if (z <= eps || z >= 1.0 - eps) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ensemble.size());
}

}  // namespace polya
