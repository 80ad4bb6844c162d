#include "polya/compensator.hpp"

#include <string>

#include "polya/error.hpp"

namespace polya {

CompensatorState CompensatorState::initial(const ModelParams& params) {
  return CompensatorState{std::vector<double>(params.urn_count(), 0.0),
                          std::vector<double>(params.urn_count(), 0.0)};
}

void CompensatorState::accumulate(const UrnSystemState& before,
                                  const ModelParams& params) noexcept {
  const std::int64_t n = params.urns();
  const std::int64_t balls = params.initial_total() + before.t;
  const std::int64_t red_sum = before.red_total();
  // D_t(j) / (m + t + 1) = (N red[j] - sum) / (N (m + t) (m + t + 1))
  const double scale = 1.0 / (static_cast<double>(n * balls) * static_cast<double>(balls + 1));
  for (std::size_t j = 0; j < drift_sum.size(); ++j)
    drift_sum[j] += static_cast<double>(n * before.red[j] - red_sum) * scale;
}

void CompensatorState::refresh(const UrnSystemState& after, const ModelParams& params) noexcept {
  for (std::size_t j = 0; j < level.size(); ++j)
    level[j] = after.gap(j, params) + params.alpha() * drift_sum[j];
}

CompensatorState compensator_update(const CompensatorState& previous,
                                    const UrnSystemState& before,
                                    const UrnSystemState& after,
                                    const ModelParams& params) {
  check_consistent(before, params);
  check_consistent(after, params);
  if (after.t != before.t + 1)
    throw PreconditionError("compensator_update needs consecutive states, got t=" +
                            std::to_string(before.t) + " and t=" + std::to_string(after.t));
  CompensatorState next = previous;
  next.accumulate(before, params);
  next.refresh(after, params);
  return next;
}

}  // namespace polya
