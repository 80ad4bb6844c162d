#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polya/config.hpp"
#include "polya/simulate.hpp"

namespace polya {

/// Pinned pass/fail thresholds of the verification gates.
namespace thresholds {
inline constexpr double kScalingSlopeTolerance = 0.10;
inline constexpr double kCriticalSlopeTolerance = 0.12;
inline constexpr double kMartingaleStandardErrors = 4.0;
/// KS 1% critical value is kKsCriticalNumerator / sqrt(M).
inline constexpr double kKsCriticalNumerator = 1.63;
inline constexpr double kSubCorrelation = 0.9;
inline constexpr double kSubStd = 0.05;
inline constexpr double kCovDiagonalTolerance = 0.08;
inline constexpr double kCovOffDiagonalTolerance = 0.05;
inline constexpr double kRawRowSum = 1e-12;
inline constexpr double kCoverageTolerance = 0.02;
inline constexpr double kAlphaTolerance = 0.05;
inline constexpr double kDyadicRatio = 1e-3;
inline constexpr double kRecursionRelativeError = 1e-10;
inline constexpr double kBoundaryEpsilon = 0.01;
}  // namespace thresholds

/// One checked statistic. A gate produces one or more of these.
struct GateResult {
  std::string gate;
  std::string statistic;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  double value = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  bool pass = false;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json(const std::string& command) const;
};

/// Where gates may write sample dumps (CSV), and the suffix they append.
struct GateOutput {
  std::filesystem::path dir;
  std::string suffix;
};

/// Worst relative error |closed - iterated| / |iterated| of the linear
/// recursion solver over `instances` seeded random problems with f(k) in
/// (0.5, 1], |g(k)| <= 1 and t <= 10^4.
double recursion_max_relative_error(std::int64_t instances, std::uint64_t seed);

/// True if the gate needs simulated trajectories.
bool gate_needs_ensemble(std::string_view gate);

/// Runs one gate. `ensemble` may be null for gates that do not need one.
std::vector<GateResult> run_gate(std::string_view gate, const ExperimentConfig& config,
                                 const Ensemble* ensemble, const GateOutput* output = nullptr);

}  // namespace polya
