#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "polya/rng.hpp"

namespace polya::testing {

/// Naive re-implementation of the urn dynamics: recompute every fraction from
/// the counts, build all N probabilities, then draw u < p_j in urn order.
struct NaiveUrns {
  std::int64_t n, a, b;
  double alpha;
  std::int64_t t = 0;
  std::vector<std::int64_t> red;

  NaiveUrns(std::int64_t n_, std::int64_t a_, std::int64_t b_, double alpha_)
      : n(n_), a(a_), b(b_), alpha(alpha_), red(static_cast<std::size_t>(n_), a_) {}

  void step(Rng& rng) {
    const std::int64_t balls = a + b + t;
    std::int64_t sum = 0;
    for (auto r : red) sum += r;
    const double zbar = static_cast<double>(sum) / static_cast<double>(n * balls);
    std::vector<double> p(red.size());
    for (std::size_t j = 0; j < red.size(); ++j)
      p[j] = alpha * zbar + (1.0 - alpha) * (static_cast<double>(red[j]) / static_cast<double>(balls));
    for (std::size_t j = 0; j < red.size(); ++j) {
      const double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
      if (u < p[j]) ++red[j];
    }
    ++t;
  }

  double z(std::size_t j) const { return static_cast<double>(red[j]) / static_cast<double>(a + b + t); }
};

/// erf(x) by its Maclaurin series in long double; accurate for |x| <= 3.
inline long double erf_series(long double x) {
  long double term = x, sum = x;
  for (int k = 1; k < 400; ++k) {
    term *= -x * x / k;
    const long double add = term / (2 * k + 1);
    sum += add;
    if (std::fabs(add) < 1e-30L) break;
  }
  return 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum;
}

inline long double normal_cdf_series(long double x) {
  return 0.5L * (1.0L + erf_series(x / std::sqrt(2.0L)));
}

/// Classical Polya urn with a = b = 1: the red count at time t is uniform on
/// {1, ..., t + 1}, so Z_t is uniform on {k / (t + 2)}.
struct UniformPolyaLaw {
  std::int64_t t;
  double mean() const { return 0.5; }
  double moment(int power) const {  // central moment
    double s = 0.0;
    for (std::int64_t k = 1; k <= t + 1; ++k)
      s += std::pow(static_cast<double>(k) / static_cast<double>(t + 2) - 0.5, power);
    return s / static_cast<double>(t + 1);
  }
};

/// Var(Z_t) = t / (12 (t + 2)) for the classical urn with a = b = 1.
inline double polya_variance(std::int64_t t) {
  return static_cast<double>(t) / (12.0 * static_cast<double>(t + 2));
}

/// Standard normal draws by Box-Muller from the harness generator.
inline std::vector<double> normal_sample(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> out;
  while (out.size() < n) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    out.push_back(r * std::cos(2.0 * std::numbers::pi * u2));
    if (out.size() < n) out.push_back(r * std::sin(2.0 * std::numbers::pi * u2));
  }
  return out;
}

}  // namespace polya::testing
