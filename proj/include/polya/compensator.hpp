#pragma once

#include <vector>

#include "polya/params.hpp"
#include "polya/state.hpp"

namespace polya {

/// Martingale compensator of the gaps,
///
///   L_t(j) = D_t(j) + alpha * sum_{k=1}^{t-1} D_k(j) / (m + k + 1),   L_0 = 0.
///
/// `drift_sum[j]` holds the sum up to the last accumulated time.
struct CompensatorState {
  std::vector<double> level;
  std::vector<double> drift_sum;

  static CompensatorState initial(const ModelParams& params);

  /// Adds D_t(j) / (m + t + 1) for the pre-step state at time t.
  void accumulate(const UrnSystemState& before, const ModelParams& params) noexcept;
  /// Sets L(j) = D(j) + alpha * drift_sum[j] for the post-step state.
  void refresh(const UrnSystemState& after, const ModelParams& params) noexcept;

  friend bool operator==(const CompensatorState&, const CompensatorState&) = default;
};

/// L_{t+1} from L_t and the two consecutive states (before at t, after at t+1).
CompensatorState compensator_update(const CompensatorState& previous,
                                    const UrnSystemState& before,
                                    const UrnSystemState& after,
                                    const ModelParams& params);

}  // namespace polya
