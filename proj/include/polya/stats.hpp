#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "polya/simulate.hpp"

namespace polya {

/// Standard normal CDF, Phi(x) = erfc(-x / sqrt 2) / 2. Uses the C library
/// erfc, whose relative error is a few ulp, so |error| <= 1e-12 everywhere.
double normal_cdf(double x) noexcept;

/// Phi^{-1}(p) for p in (0, 1): bracketing bisection polished by Newton steps
/// on normal_cdf, to |x - x*| <= 1e-10.
double normal_quantile(double p);

/// P(K > lambda) for the Kolmogorov distribution K. Uses the alternating
/// series 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2) for lambda >= 1 and the
/// Jacobi theta form for lambda < 1; both run until the term is < 1e-16 or 100
/// terms.
double kolmogorov_survival(double lambda) noexcept;

struct KsResult {
  double statistic = 0.0;
  std::size_t n = 0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against the standard normal, with the
/// asymptotic p-value kolmogorov_survival(sqrt(n) D_n). Needs n >= 10.
KsResult ks_test(std::span<const double> sample);

/// Two-sample Kolmogorov-Smirnov test, asymptotic p-value.
KsResult ks_two_sample(std::span<const double> first, std::span<const double> second);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope x with the slope's standard
/// error from the residual variance (n - 2 degrees of freedom).
LinearFit ols(std::span<const double> xs, std::span<const double> ys);

/// OLS of ln y on ln x. Needs >= 3 points, x distinct and positive, y positive.
LinearFit ols_loglog(std::span<const double> xs, std::span<const double> ys);

double sample_mean(std::span<const double> xs);
/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> xs);
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Regularized lower incomplete gamma P(s, x).
double regularized_gamma_p(double s, double x);
double chi_square_cdf(double x, double dof);

struct IntervalEstimate {
  double center = 0.0;
  double half_width = 0.0;
  double level = 0.0;
  std::int64_t t = 0;

  bool covers(double value) const noexcept {
    return value >= center - half_width && value <= center + half_width;
  }
};

/// Asymptotic interval for the common limit Z from the pivot
/// sqrt(N t) (Z_t - Z) / sqrt(U_t), U_t = Z_t - Z_t^2.
IntervalEstimate z_confidence_interval(const Trajectory& trajectory, std::int64_t t,
                                       double level);

struct AlphaEstimate {
  double alpha_hat = 0.0;
  double standard_error = 0.0;
  double variance = 0.0;  // sample variance of the self-normalized gaps
  std::size_t replicas = 0;
  std::int64_t t = 0;
};

/// Interaction strength from the cross-replica variance v of
/// W = sqrt(t) D_t(urn) / sqrt((1 - 1/N) U_t), whose limit variance is
/// 1 / (2 alpha - 1) in the super-critical regime: alpha_hat = (1 + 1/v) / 2.
/// The standard error uses the delta method with the normal-theory variance
/// Var(v) = 2 v^2 / (M - 1), giving 1 / (v sqrt(2 (M - 1))).
AlphaEstimate estimate_alpha(const Ensemble& ensemble, std::int64_t t, std::size_t urn);

/// Inverts v = 1 / (2 alpha - 1). Throws PreconditionError unless v is
/// positive and finite.
double alpha_from_variance(double variance);

struct AlphaTest {
  double alpha0 = 0.0;
  double statistic = 0.0;  // (M - 1) v (2 alpha0 - 1), ~ chi^2_{M-1} under H0
  double p_value = 1.0;    // two-sided
  bool reject = false;
};

/// Level-`level` test of H0: alpha = alpha0 (alpha0 > 1/2) from an estimate.
AlphaTest test_alpha(const AlphaEstimate& estimate, double alpha0, double level);

}  // namespace polya
