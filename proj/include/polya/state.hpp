#pragma once

#include <cstdint>
#include <vector>

#include "polya/params.hpp"
#include "polya/rng.hpp"

namespace polya {

/// Red-ball counts of every urn at time t. Urn i holds m + t balls, of which
/// red[i] are red, with a <= red[i] <= a + t.
struct UrnSystemState {
  std::int64_t t = 0;
  std::vector<std::int64_t> red;

  static UrnSystemState initial(const ModelParams& params);

  std::int64_t red_total() const noexcept;

  /// Z_t(i) = red[i] / (m + t).
  double fraction(std::size_t urn, const ModelParams& params) const noexcept;
  /// Z_t = (sum_i red[i] / (m + t)) / N.
  double mean_fraction(const ModelParams& params) const noexcept;
  /// D_t(j) = Z_t(j) - Z_t, evaluated as (N red[j] - sum_i red[i]) / (N (m + t))
  /// so that symmetric states give exactly zero.
  double gap(std::size_t urn, const ModelParams& params) const noexcept;

  friend bool operator==(const UrnSystemState&, const UrnSystemState&) = default;
};

/// Throws InvariantViolation if the state cannot have been reached from the
/// initial condition of `params`.
void check_consistent(const UrnSystemState& state, const ModelParams& params);

/// Per-urn probabilities that the next added ball is red, all computed from
/// `state` before any draw.
std::vector<double> reinforcement_probabilities(const UrnSystemState& state,
                                                const ModelParams& params);

/// One synchronous update of all urns. Urn j receives a red ball iff
/// rng.uniform() < p_j, with draws consumed in urn order 0..N-1.
UrnSystemState step(const UrnSystemState& state, const ModelParams& params, Rng& rng);

/// In-place form of step() for hot loops; does not re-validate the state.
void advance(UrnSystemState& state, const ModelParams& params, Rng& rng) noexcept;

}  // namespace polya
