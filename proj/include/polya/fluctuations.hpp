#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "polya/simulate.hpp"

namespace polya {

/// Scaling regime of E[D_t^2]: t^{-2 alpha} below 1/2, t^{-1} ln t at 1/2,
/// t^{-1} above.
enum class Regime { sub, critical, super };

Regime regime_of(double alpha) noexcept;
std::string_view to_string(Regime regime) noexcept;

struct FitWindow {
  std::int64_t lo = 1;
  std::int64_t hi = 2;
};

struct ScalingFit {
  double alpha = 0.0;
  std::size_t urn = 0;
  FitWindow window;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  Regime regime = Regime::sub;
  std::size_t points = 0;
  /// Expected slope: -2 alpha (sub) or -1 (critical, super).
  double expected_slope = 0.0;
};

/// Minimum number of recorded times in a scaling fit window.
inline constexpr std::size_t kMinFitPoints = 8;
/// Upper bound on the relative standard error of each mean-square gap estimate.
inline constexpr double kMaxRelativeStderr = 0.05;

/// Cross-replica mean of D_t(urn)^2 and its standard error.
struct MeanSquareGap {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};
MeanSquareGap mean_square_gap(const Ensemble& ensemble, std::int64_t t, std::size_t urn);

/// OLS of ln E^[D_t^2] on ln t over recorded times in the window. In the
/// critical regime the response is ln(E^[D_t^2] / ln t), so every regime
/// except sub expects slope -1. `regime` must match the ensemble's alpha.
ScalingFit fit_scaling_exponent(const Ensemble& ensemble, std::size_t urn, FitWindow window,
                                Regime regime);

/// Self-normalized pivots, each asymptotically N(0, 1):
///   S1 = sqrt(N t) (Z_t - Z_T) / sqrt(U_t)                           any alpha
///   S2 = sqrt((2a - 1) t) D_t(j) / sqrt((1 - 1/N) U_t)               a > 1/2
///   S3 = sqrt(t / ln t) D_t(j) / sqrt((1 - 1/N) U_t)                 a = 1/2
///   S4 = sqrt(t) (Z_t(j) - Z_T) / sqrt((1/N + (1-1/N)/(2a-1)) U_t)   a > 1/2
/// with U_t = Z_t - Z_t^2 and Z_T standing in for the limit Z.
enum class PivotKind { S1, S2, S3, S4 };

std::string_view to_string(PivotKind kind) noexcept;

struct CltOptions {
  /// Minimum T / t for pivots that use Z_T as the limit proxy.
  double proxy_ratio = 100.0;
  /// Drop the (2 alpha - 1) factor from S2 / S4. Only for power checks:
  /// the resulting statistic is not standard normal.
  bool omit_interaction_factor = false;
};

struct CltSample {
  PivotKind kind = PivotKind::S1;
  std::int64_t t = 0;
  std::int64_t proxy_t = 0;
  std::vector<double> values;
};

CltSample clt_sample(const Ensemble& ensemble, PivotKind kind, std::int64_t t,
                     std::int64_t proxy_t, std::size_t urn, const CltOptions& options = {});

struct SubcriticalDiagnostics {
  double corr = 0.0;      // Pearson correlation of t^a D_t across t1 and t2
  double var_hat = 0.0;   // sample variance of t2^a D_{t2}
  double mean_abs = 0.0;  // mean |t2^a D_{t2}|
};

/// Diagnostics of the a.s. limit of t^alpha D_t(urn) for alpha < 1/2.
/// Needs t2 >= 2 t1.
SubcriticalDiagnostics limit_diagnostics_sub(const Ensemble& ensemble, std::size_t urn,
                                             std::int64_t t1, std::int64_t t2);

/// Dense square matrix, row-major.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  explicit SquareMatrix(std::size_t size = 0) : n(size), data(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) noexcept { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data[i * n + j]; }
  double row_sum(std::size_t i) const noexcept;
};

/// Sample covariance (divisor M - 1) of sqrt((2a - 1) t) D_t / sqrt(U_t).
/// Expected limit: (1 - 1/N) on the diagonal, -1/N off it. Needs a > 1/2.
SquareMatrix covariance_structure(const Ensemble& ensemble, std::int64_t t);

/// Sample covariance of the raw gap vector D_t. Rows sum to zero up to
/// rounding because sum_j D_t(j) = 0.
SquareMatrix raw_gap_covariance(const Ensemble& ensemble, std::int64_t t);

/// Fraction of replicas whose Z_T lies within eps of 0 or 1.
double boundary_fraction(const Ensemble& ensemble, std::int64_t t, double eps);

}  // namespace polya
