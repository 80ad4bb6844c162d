#include "polya/state.hpp"

#include <numeric>
#include <string>

#include "polya/error.hpp"

namespace polya {

UrnSystemState UrnSystemState::initial(const ModelParams& params) {
  return UrnSystemState{0, std::vector<std::int64_t>(params.urn_count(), params.initial_red())};
}

std::int64_t UrnSystemState::red_total() const noexcept {
  return std::accumulate(red.begin(), red.end(), std::int64_t{0});
}

double UrnSystemState::fraction(std::size_t urn, const ModelParams& params) const noexcept {
  return static_cast<double>(red[urn]) / static_cast<double>(params.initial_total() + t);
}

double UrnSystemState::mean_fraction(const ModelParams& params) const noexcept {
  return static_cast<double>(red_total()) /
         static_cast<double>(params.urns() * (params.initial_total() + t));
}

double UrnSystemState::gap(std::size_t urn, const ModelParams& params) const noexcept {
  const std::int64_t n = params.urns();
  return static_cast<double>(n * red[urn] - red_total()) /
         static_cast<double>(n * (params.initial_total() + t));
}

void check_consistent(const UrnSystemState& state, const ModelParams& params) {
  if (state.t < 0) throw InvariantViolation("negative time " + std::to_string(state.t));
  if (state.red.size() != params.urn_count())
    throw InvariantViolation("state has " + std::to_string(state.red.size()) +
                             " urns, params expect " + std::to_string(params.urns()));
  const std::int64_t lo = params.initial_red();
  const std::int64_t hi = params.initial_red() + state.t;
  for (std::size_t i = 0; i < state.red.size(); ++i) {
    if (state.red[i] < lo || state.red[i] > hi)
      throw InvariantViolation("urn " + std::to_string(i) + " has " +
                               std::to_string(state.red[i]) + " red balls at t=" +
                               std::to_string(state.t) + ", outside [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]");
  }
}

std::vector<double> reinforcement_probabilities(const UrnSystemState& state,
                                                const ModelParams& params) {
  check_consistent(state, params);
  const double mean = state.mean_fraction(params);
  std::vector<double> p(state.red.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    p[j] = reinforcement_probability(params.alpha(), mean, state.fraction(j, params));
  return p;
}

UrnSystemState step(const UrnSystemState& state, const ModelParams& params, Rng& rng) {
  check_consistent(state, params);
  UrnSystemState next = state;
  advance(next, params, rng);
  return next;
}

void advance(UrnSystemState& state, const ModelParams& params, Rng& rng) noexcept {
  const std::int64_t balls = params.initial_total() + state.t;
  const double total = static_cast<double>(balls);
  const double alpha = params.alpha();
  const std::int64_t red_sum = state.red_total();
  const double mean = static_cast<double>(red_sum) / static_cast<double>(params.urns() * balls);
  // p_j depends only on the pre-step mean and red[j], and red[j] is read
  // before it is updated, so every probability comes from the input state.
  for (auto& r : state.red) {
    const double p = reinforcement_probability(alpha, mean, static_cast<double>(r) / total);
    r += rng.bernoulli(p) ? 1 : 0;
  }
  ++state.t;
}

}  // namespace polya
