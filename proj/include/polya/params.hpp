#pragma once

#include <cstddef>
#include <cstdint>

namespace polya {

/// Parameters of the mean-field interacting urn system: `urns` two-colour
/// urns, each starting with `initial_red` red and `initial_black` black
/// balls, coupled through the interaction weight `alpha` in [0, 1].
class ModelParams {
public:
  /// Throws ArgumentError unless urns >= 2, red >= 1, black >= 1 and
  /// 0 <= alpha <= 1.
  ModelParams(std::int64_t urns, std::int64_t initial_red,
              std::int64_t initial_black, double alpha);

  std::int64_t urns() const noexcept { return urns_; }
  std::size_t urn_count() const noexcept { return static_cast<std::size_t>(urns_); }
  std::int64_t initial_red() const noexcept { return red_; }
  std::int64_t initial_black() const noexcept { return black_; }
  double alpha() const noexcept { return alpha_; }
  /// Initial number of balls per urn, red + black.
  std::int64_t initial_total() const noexcept { return red_ + black_; }
  /// a / m, the initial red fraction (and the mean of every Z_t).
  double initial_fraction() const noexcept {
    return static_cast<double>(red_) / static_cast<double>(initial_total());
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
  std::int64_t urns_;
  std::int64_t red_;
  std::int64_t black_;
  double alpha_;
};

/// Conditional probability that the ball added to an urn is red, given the
/// system-wide red fraction and the urn's own red fraction. Every component
/// (sampler and exact oracle) goes through this one function.
constexpr double reinforcement_probability(double alpha, double mean_fraction,
                                           double own_fraction) noexcept {
  return alpha * mean_fraction + (1.0 - alpha) * own_fraction;
}

}  // namespace polya
