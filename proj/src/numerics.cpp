#include "polya/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polya/error.hpp"
#include "polya/summation.hpp"

namespace polya {

CoefficientTable::CoefficientTable(double alpha, std::int64_t m, std::int64_t t)
    : alpha_(alpha), m_(m), t_(t) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ArgumentError("coefficients need alpha in (0, 1], got " + std::to_string(alpha));
  if (m < 2) throw ArgumentError("coefficients need m >= 2, got " + std::to_string(m));
  if (t < 1) throw ArgumentError("coefficients need t >= 1, got " + std::to_string(t));
  log_.assign(static_cast<std::size_t>(t) + 1, 0.0);
  double acc = 0.0;
  for (std::int64_t k = t; k >= 1; --k) {
    acc += std::log1p(-alpha / static_cast<double>(m + k + 1));
    log_[static_cast<std::size_t>(k - 1)] = acc;
  }
}

double CoefficientTable::log_value(std::int64_t k) const {
  if (k < 1 || k > t_ + 1)
    throw ArgumentError("coefficient index k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(t_ + 1) + "]");
  return log_[static_cast<std::size_t>(k - 1)];
}

double CoefficientTable::value(std::int64_t k) const { return std::exp(log_value(k)); }

CoefficientTable coefficients(double alpha, std::int64_t m, std::int64_t t) {
  return CoefficientTable(alpha, m, t);
}

double uniform_ratio_check(const CoefficientTable& table, std::int64_t k_min, int points) {
  const std::int64_t t = table.t();
  if (k_min < 1 || k_min > t)
    throw ArgumentError("k_min must lie in [1, t], got " + std::to_string(k_min));
  points = std::max(points, 20);
  const double span = std::log(static_cast<double>(t) / static_cast<double>(k_min));
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const auto k = std::clamp<std::int64_t>(
        std::llround(static_cast<double>(k_min) * std::exp(frac * span)), k_min, t);
    const double log_ratio = table.log_value(k) -
                             table.alpha() * std::log(static_cast<double>(k) / static_cast<double>(t));
    worst = std::max(worst, std::fabs(std::expm1(log_ratio)));
  }
  return worst;
}

double dyadic_ratio_deviation(double alpha, std::int64_t m, std::int64_t t) {
  const CoefficientTable doubled(alpha, m, 2 * t);
  // ln c_{1,t} is the sum of the factors h = 1..t, i.e. ln c_{1,2t} - ln c_{t+1,2t}.
  const double log_c_t = doubled.log_value(1) - doubled.log_value(t + 1);
  const double log_c_2t = doubled.log_value(1);
  const double log_ratio = (log_c_t + alpha * std::log(static_cast<double>(t))) -
                           (log_c_2t + alpha * std::log(2.0 * static_cast<double>(t)));
  return std::fabs(std::expm1(log_ratio));
}

double solve_linear_recursion(const SequenceFn& f, const SequenceFn& g, std::int64_t t) {
  if (t < 0) throw ArgumentError("recursion horizon must be nonnegative");
  if (t == 0) return 0.0;
  // log_prod[i] = sum_{k<=i} ln f(k)
  std::vector<double> log_prod(static_cast<std::size_t>(t));
  CompensatedSum acc;
  for (std::int64_t k = 0; k < t; ++k) {
    const double fk = f(k);
    if (!(fk > 0.0)) throw ArgumentError("f(" + std::to_string(k) + ") must be positive");
    acc += std::log(fk);
    log_prod[static_cast<std::size_t>(k)] = acc.value();
  }
  const double log_total = log_prod.back();
  CompensatedSum x;
  for (std::int64_t i = 0; i < t; ++i)
    x += g(i) * std::exp(log_total - log_prod[static_cast<std::size_t>(i)]);
  return x.value();
}

double iterate_linear_recursion(const SequenceFn& f, const SequenceFn& g, std::int64_t t) {
  if (t < 0) throw ArgumentError("recursion horizon must be nonnegative");
  double x = 0.0;
  for (std::int64_t k = 0; k < t; ++k) x = f(k) * x + g(k);
  return x;
}

}  // namespace polya
