#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "polya/compensator.hpp"
#include "polya/params.hpp"
#include "polya/state.hpp"

namespace polya {

/// Largest N * t_max accepted by enumerate_exact (2^24 leaf outcomes).
inline constexpr std::int64_t kMaxEnumerationBits = 24;

/// Exact moments at one depth t of the outcome tree. Gap moments refer to
/// urn 0.
struct ExactMomentsAt {
  std::int64_t t = 0;
  double mean_z = 0.0;      // E[Z_t]
  double mean_z_sq = 0.0;   // E[Z_t^2]
  double gap_sq = 0.0;      // E[D_t^2]
  double gap_fourth = 0.0;  // E[D_t^4]
  double gap_abs = 0.0;     // E[|D_t|]
  double mass = 0.0;        // total probability reaching depth t
};

struct ExactMoments {
  ModelParams params;
  std::int64_t t_max = 0;
  std::vector<ExactMomentsAt> by_time;  // index t = 0..t_max
};

struct EnumerationOptions {
  /// Branches with probability below this are dropped. 0 (the default) is
  /// exact; any positive cutoff makes the result approximate and disables the
  /// unit-mass assertion.
  double prune_below = 0.0;
};

/// Walks all 2^(N t_max) colour sequences, weighting each by the product of
/// conditional Bernoulli probabilities. Throws ResourceBoundError when
/// N * t_max > kMaxEnumerationBits, InvariantViolation if the probability
/// mass at some depth differs from 1 by more than 1e-10 (exact mode).
ExactMoments enumerate_exact(const ModelParams& params, std::int64_t t_max,
                             const EnumerationOptions& options = {});

/// Exact E[f(next state) | state] over the 2^N outcomes of one step.
double one_step_expectation(const ModelParams& params, const UrnSystemState& state,
                            const std::function<double(const UrnSystemState&)>& f);

struct DriftCheck {
  std::vector<double> drift;      // E[Z_{t+1}(j) | state] - Z_t(j), by enumeration
  std::vector<double> predicted;  // -alpha D_t(j) / (m + t + 1)
  std::vector<double> residual;   // drift - predicted

  double max_abs_residual() const noexcept;
};

DriftCheck conditional_drift_check(const ModelParams& params, const UrnSystemState& state);

/// E[L_{t+1}(urn) | state] - L_t(urn) by one-step enumeration. `comp` must
/// hold the compensator at the time of `state` (drift sum up to t-1).
double compensator_increment_check(const ModelParams& params, const UrnSystemState& state,
                                   const CompensatorState& comp, std::size_t urn);

/// Residual of the scaled-gap drift identity
///   E[t'^a D_{t+1} | state] - t^a D_t = [(1 + 1/t)^a (1 - a/(m+t+1)) - 1] t^a D_t
/// with t' = t + 1, evaluated by one-step enumeration. Requires state.t >= 1.
double scaled_gap_drift_residual(const ModelParams& params, const UrnSystemState& state,
                                 std::size_t urn);

}  // namespace polya
