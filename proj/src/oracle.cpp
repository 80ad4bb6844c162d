#include "polya/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polya/error.hpp"
#include "polya/summation.hpp"

namespace polya {
namespace {

constexpr double kMassTolerance = 1e-10;
constexpr std::size_t kMaxOneStepUrns = 24;

struct DepthAccumulator {
  CompensatedSum mass, z, z_sq, gap_sq, gap_fourth, gap_abs;
};

/// Calls visit(mask, probability, next_state) for each of the 2^N outcomes of
/// one step; bit j of mask set means urn j receives a red ball.
template <typename Visit>
void for_each_outcome(const ModelParams& params, const UrnSystemState& state, Visit&& visit) {
  const std::vector<double> p = reinforcement_probabilities(state, params);
  const std::size_t n = p.size();
  UrnSystemState next = state;
  next.t = state.t + 1;
  const std::uint64_t outcomes = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    double prob = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool red = (mask >> j) & 1U;
      prob *= red ? p[j] : 1.0 - p[j];
      next.red[j] = state.red[j] + (red ? 1 : 0);
    }
    visit(mask, prob, next);
  }
}

class TreeWalker {
public:
  TreeWalker(const ModelParams& params, std::int64_t t_max, double prune_below)
      : params_(params), t_max_(t_max), prune_below_(prune_below),
        depth_(static_cast<std::size_t>(t_max) + 1) {}

  void walk(const UrnSystemState& state, double prob) {
    auto& acc = depth_[static_cast<std::size_t>(state.t)];
    const double z = state.mean_fraction(params_);
    const double d = state.gap(0, params_);
    const double d_sq = d * d;
    acc.mass += prob;
    acc.z += prob * z;
    acc.z_sq += prob * z * z;
    acc.gap_sq += prob * d_sq;
    acc.gap_fourth += prob * d_sq * d_sq;
    acc.gap_abs += prob * std::fabs(d);
    if (state.t == t_max_) return;
    for_each_outcome(params_, state, [&](std::uint64_t, double branch, const UrnSystemState& next) {
      const double child = prob * branch;
      if (child == 0.0 || child < prune_below_) return;
      walk(next, child);
    });
  }

  ExactMoments result() const {
    ExactMoments out{params_, t_max_, {}};
    for (std::size_t t = 0; t < depth_.size(); ++t) {
      const auto& acc = depth_[t];
      out.by_time.push_back({static_cast<std::int64_t>(t), acc.z.value(), acc.z_sq.value(),
                             acc.gap_sq.value(), acc.gap_fourth.value(), acc.gap_abs.value(),
                             acc.mass.value()});
    }
    return out;
  }

private:
  const ModelParams& params_;
  std::int64_t t_max_;
  double prune_below_;
  std::vector<DepthAccumulator> depth_;
};

}  // namespace

ExactMoments enumerate_exact(const ModelParams& params, std::int64_t t_max,
                             const EnumerationOptions& options) {
  if (t_max < 0) throw ArgumentError("t_max must be nonnegative");
  if (params.urns() * t_max > kMaxEnumerationBits)
    throw ResourceBoundError("exact enumeration needs N * t_max <= " +
                             std::to_string(kMaxEnumerationBits) + " (2^" +
                             std::to_string(kMaxEnumerationBits) + " outcomes), got N * t_max = " +
                             std::to_string(params.urns() * t_max));
  if (options.prune_below < 0.0) throw ArgumentError("prune_below must be nonnegative");

  TreeWalker walker(params, t_max, options.prune_below);
  walker.walk(UrnSystemState::initial(params), 1.0);
  ExactMoments moments = walker.result();

  if (options.prune_below == 0.0) {
    for (const auto& row : moments.by_time)
      if (std::fabs(row.mass - 1.0) > kMassTolerance)
        throw InvariantViolation("probability mass at depth " + std::to_string(row.t) + " is " +
                                 std::to_string(row.mass));
  }
  return moments;
}

double one_step_expectation(const ModelParams& params, const UrnSystemState& state,
                            const std::function<double(const UrnSystemState&)>& f) {
  if (state.red.size() > kMaxOneStepUrns)
    throw ResourceBoundError("one-step enumeration supports at most " +
                             std::to_string(kMaxOneStepUrns) + " urns");
  CompensatedSum sum;
  for_each_outcome(params, state, [&](std::uint64_t, double prob, const UrnSystemState& next) {
    sum += prob * f(next);
  });
  return sum.value();
}

double DriftCheck::max_abs_residual() const noexcept {
  double worst = 0.0;
  for (double r : residual) worst = std::max(worst, std::fabs(r));
  return worst;
}

DriftCheck conditional_drift_check(const ModelParams& params, const UrnSystemState& state) {
  check_consistent(state, params);
  const std::size_t n = params.urn_count();
  const double denom = static_cast<double>(params.initial_total() + state.t + 1);
  DriftCheck check;
  for (std::size_t j = 0; j < n; ++j) {
    const double expected_next = one_step_expectation(
        params, state, [&](const UrnSystemState& next) { return next.fraction(j, params); });
    const double drift = expected_next - state.fraction(j, params);
    const double predicted = -params.alpha() * state.gap(j, params) / denom;
    check.drift.push_back(drift);
    check.predicted.push_back(predicted);
    check.residual.push_back(drift - predicted);
  }
  return check;
}

double compensator_increment_check(const ModelParams& params, const UrnSystemState& state,
                                   const CompensatorState& comp, std::size_t urn) {
  check_consistent(state, params);
  CompensatorState current = comp;
  current.refresh(state, params);
  const double expected_next = one_step_expectation(params, state, [&](const UrnSystemState& next) {
    return compensator_update(current, state, next, params).level[urn];
  });
  return expected_next - current.level[urn];
}

double scaled_gap_drift_residual(const ModelParams& params, const UrnSystemState& state,
                                 std::size_t urn) {
  check_consistent(state, params);
  if (state.t < 1) throw PreconditionError("scaled gap drift needs t >= 1");
  const double a = params.alpha();
  const double t = static_cast<double>(state.t);
  const double scaled_now = std::pow(t, a) * state.gap(urn, params);
  const double scaled_next_mean = one_step_expectation(params, state, [&](const UrnSystemState& next) {
    return std::pow(t + 1.0, a) * next.gap(urn, params);
  });
  const double m = static_cast<double>(params.initial_total());
  const double factor = std::pow(1.0 + 1.0 / t, a) * (1.0 - a / (m + t + 1.0)) - 1.0;
  return (scaled_next_mean - scaled_now) - factor * scaled_now;
}

}  // namespace polya
