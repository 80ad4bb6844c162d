#pragma once

#include <cmath>

namespace polya {

/// Neumaier compensated summation.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace polya
