#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace polya {

/// c_{k,t} = prod_{h=k}^{t} (1 - alpha / (m + h + 1)) for 1 <= k <= t, and
/// c_{t+1,t} = 1. Stored as logarithms (suffix sums of log1p terms), so values
/// that underflow in linear space stay exact to rounding.
class CoefficientTable {
public:
  CoefficientTable(double alpha, std::int64_t m, std::int64_t t);

  double alpha() const noexcept { return alpha_; }
  std::int64_t m() const noexcept { return m_; }
  std::int64_t t() const noexcept { return t_; }

  /// ln c_{k,t}, k in [1, t + 1].
  double log_value(std::int64_t k) const;
  /// c_{k,t}, k in [1, t + 1].
  double value(std::int64_t k) const;
  double operator()(std::int64_t k) const { return value(k); }

private:
  double alpha_;
  std::int64_t m_;
  std::int64_t t_;
  std::vector<double> log_;  // log_[k - 1] = ln c_{k,t}
};

/// Needs alpha in (0, 1], m >= 2, t >= 1; throws ArgumentError otherwise.
CoefficientTable coefficients(double alpha, std::int64_t m, std::int64_t t);

/// max over a geometric grid of k in [k_min, t] (at least `points` >= 20
/// points) of |c_{k,t} / (k/t)^alpha - 1|.
double uniform_ratio_check(const CoefficientTable& table, std::int64_t k_min, int points = 24);

/// |c_{1,t} t^a / (c_{1,2t} (2t)^a) - 1|; tends to 0 because c_{1,t} ~ c t^{-a}.
double dyadic_ratio_deviation(double alpha, std::int64_t m, std::int64_t t);

using SequenceFn = std::function<double(std::int64_t)>;

/// x_t for x_0 = 0, x_{k+1} = f(k) x_k + g(k), from the closed form
///   x_t = prod_{k<t} f(k) * sum_{i<t} g(i) / prod_{k<=i} f(k)
/// with the products carried as log-sums. Needs f(k) > 0 for k < t.
double solve_linear_recursion(const SequenceFn& f, const SequenceFn& g, std::int64_t t);

/// Same x_t by iterating the recursion directly.
double iterate_linear_recursion(const SequenceFn& f, const SequenceFn& g, std::int64_t t);

}  // namespace polya
