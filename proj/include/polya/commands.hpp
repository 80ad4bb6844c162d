#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "polya/config.hpp"
#include "polya/oracle.hpp"
#include "polya/simulate.hpp"

namespace polya {

/// Replicas simulated and written per block; bounds memory for large M.
inline constexpr std::size_t kSimulationBlock = 1024;

struct SimulateSummary {
  std::string simulation_hash;
  std::vector<std::filesystem::path> csv_files;
};

/// Writes `<out_dir>/traj_<hash>_r<replica>.csv` and `.json` for every
/// replica. Rewrites identical bytes for a fixed config, whatever the thread
/// budget.
SimulateSummary cmd_simulate(const ExperimentConfig& config);

/// Exact moment table keyed by time:
/// {"params": {...}, "t_max": n, "moments": {"0": {...}, "1": {...}, ...}}.
nlohmann::ordered_json oracle_table(const ExactMoments& moments);
nlohmann::ordered_json cmd_oracle(const ModelParams& params, std::int64_t t_max);

/// Loads the trajectories written by cmd_simulate for `config`.
/// Throws IoError for missing files, ConfigError when a sidecar's
/// simulation hash does not match the config.
Ensemble load_ensemble(const ExperimentConfig& config);

struct AnalyzeOutcome {
  nlohmann::ordered_json report;
  std::filesystem::path report_path;
  bool all_pass = true;
};

/// Runs the selected gates and writes `report_<config hash>[.<n>].json`
/// into out_dir without overwriting earlier reports.
AnalyzeOutcome cmd_analyze(const ExperimentConfig& config, const std::string& command_line);

/// Renders a report as an aligned text table and writes a gnuplot-friendly
/// CSV (whitespace separated, `#` header) to `csv_path`.
void cmd_report(const std::filesystem::path& report_path, std::ostream& table,
                const std::filesystem::path& csv_path);

/// CSV `k,c` of the coefficient table, k = 1..t+1, every `stride`-th k plus
/// the last.
void write_coefficient_csv(std::ostream& out, double alpha, std::int64_t m, std::int64_t t,
                           std::int64_t stride = 1);

}  // namespace polya
