#include "polya/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "polya/error.hpp"
#include "polya/summation.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace polya {

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("normal_quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double kolmogorov_survival(double lambda) noexcept {
  if (lambda <= 0.0) return 1.0;
  constexpr int kMaxTerms = 100;
  constexpr double kTermCutoff = 1e-16;
  if (lambda < 1.0) {
    // P(K <= lambda) = sqrt(2 pi) / lambda * sum_k exp(-(2k-1)^2 pi^2 / (8 lambda^2))
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * c);
      sum += term;
      if (term < kTermCutoff) break;
    }
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < kTermCutoff) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 10) throw ArgumentError("ks_test needs at least 10 values, got " + std::to_string(n));
  std::vector<double> sorted(sample.begin(), sample.end());
  for (double x : sorted)
    if (!std::isfinite(x)) throw ArgumentError("ks_test sample contains a non-finite value");
  std::sort(sorted.begin(), sorted.end());
  const double nn = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / nn - f, f - static_cast<double>(i) / nn});
  }
  return {d, n, kolmogorov_survival(std::sqrt(nn) * d)};
}

KsResult ks_two_sample(std::span<const double> first, std::span<const double> second) {
  if (first.empty() || second.empty()) throw ArgumentError("ks_two_sample needs nonempty samples");
  std::vector<double> a(first.begin(), first.end()), b(second.begin(), second.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double effective = std::sqrt(na * nb / (na + nb));
  return {d, a.size() + b.size(), kolmogorov_survival(effective * d)};
}

LinearFit ols(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n != ys.size()) throw ArgumentError("ols needs equally many x and y values");
  if (n < 3) throw ArgumentError("ols needs at least 3 points");
  const double mx = sample_mean(xs), my = sample_mean(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("ols needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

LinearFit ols_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ArgumentError("ols_loglog needs equally many x and y values");
  std::vector<double> lx, ly;
  lx.reserve(xs.size());
  ly.reserve(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw ArgumentError("ols_loglog needs positive x and y values");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  return ols(lx, ly);
}

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw ArgumentError("mean of an empty sample");
  CompensatedSum sum;
  for (double x : xs) sum += x;
  return sum.value() / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ArgumentError("variance needs at least two values");
  const double mean = sample_mean(xs);
  CompensatedSum sum;
  for (double x : xs) sum += (x - mean) * (x - mean);
  return sum.value() / static_cast<double>(xs.size() - 1);
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ArgumentError("correlation needs two equally long samples of size >= 2");
  const double mx = sample_mean(xs), my = sample_mean(ys);
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx.value() == 0.0 || syy.value() == 0.0)
    throw PreconditionError("correlation of a constant sample is undefined");
  return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

double regularized_gamma_p(double s, double x) {
  if (!(s > 0.0)) throw ArgumentError("gamma shape must be positive");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(s, x);
}

double chi_square_cdf(double x, double dof) { return regularized_gamma_p(0.5 * dof, 0.5 * x); }

IntervalEstimate z_confidence_interval(const Trajectory& trajectory, std::int64_t t, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");
  if (t < 1) throw PreconditionError("confidence interval needs t >= 1");
  const double z = trajectory.mean_fraction(trajectory.row_of(t));
  const double u = z - z * z;
  const double n = static_cast<double>(trajectory.urns());
  const double q = normal_quantile(0.5 * (1.0 + level));
  return {z, q * std::sqrt(u / (n * static_cast<double>(t))), level, t};
}

double alpha_from_variance(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw PreconditionError("degenerate ensemble: gap variance is " + std::to_string(variance));
  return 0.5 * (1.0 + 1.0 / variance);
}

AlphaEstimate estimate_alpha(const Ensemble& ensemble, std::int64_t t, std::size_t urn) {
  const std::size_t m = ensemble.size();
  if (m < 500) throw PreconditionError("estimate_alpha needs at least 500 replicas");
  if (t < 1) throw PreconditionError("estimate_alpha needs t >= 1");
  if (urn >= ensemble.params.urn_count()) throw ArgumentError("urn index out of range");
  const double n = static_cast<double>(ensemble.params.urns());
  std::vector<double> w;
  w.reserve(m);
  for (const auto& traj : ensemble.trajectories) {
    const std::size_t row = traj.row_of(t);
    const double z = traj.mean_fraction(row);
    const double u = z - z * z;
    w.push_back(std::sqrt(static_cast<double>(t)) * traj.gap(row, urn) /
                std::sqrt((1.0 - 1.0 / n) * u));
  }
  const double v = sample_variance(w);
  AlphaEstimate est;
  est.alpha_hat = alpha_from_variance(v);
  est.variance = v;
  est.standard_error = 1.0 / (v * std::sqrt(2.0 * static_cast<double>(m - 1)));
  est.replicas = m;
  est.t = t;
  return est;
}

AlphaTest test_alpha(const AlphaEstimate& estimate, double alpha0, double level) {
  if (!(alpha0 > 0.5 && alpha0 <= 1.0)) throw ArgumentError("alpha0 must lie in (1/2, 1]");
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");
  if (estimate.replicas < 2) throw ArgumentError("estimate has too few replicas");
  const double dof = static_cast<double>(estimate.replicas - 1);
  AlphaTest test;
  test.alpha0 = alpha0;
  test.statistic = dof * estimate.variance * (2.0 * alpha0 - 1.0);
  const double cdf = chi_square_cdf(test.statistic, dof);
  test.p_value = std::min(1.0, 2.0 * std::min(cdf, 1.0 - cdf));
  test.reject = test.p_value < 1.0 - level;
  return test;
}

}  // namespace polya
