#include "polya/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "polya/error.hpp"
#include "polya/gates.hpp"
#include "polya/numerics.hpp"
#include "polya/simulate.hpp"
#include "polya/trajectory_io.hpp"

namespace polya {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

ordered_json params_json(const ModelParams& p) {
  return {{"N", p.urns()}, {"a", p.initial_red()}, {"b", p.initial_black()}, {"alpha", p.alpha()}};
}

}  // namespace

SimulateSummary cmd_simulate(const ExperimentConfig& config) {
  validate(config);
  const ModelParams params = config.params();
  const auto grid = recording_grid(config);
  const std::string hash = simulation_hash(config);
  const fs::path dir = config.out_dir;
  ensure_dir(dir);

  SimulateSummary summary{hash, {}};
  for (std::uint64_t first = 0; first < config.M; first += kSimulationBlock) {
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(kSimulationBlock, config.M - first));
    const Ensemble block = simulate_ensemble(params, count, config.T_max, grid, config.master_seed,
                                             {config.threads, first});
    for (std::size_t i = 0; i < block.size(); ++i) {
      const std::uint64_t replica = first + i;
      const std::string stem = trajectory_stem(hash, replica);
      const auto& traj = block.trajectories[i];
      std::ostringstream csv, side;
      write_trajectory_csv(csv, traj);
      write_trajectory_sidecar(side, traj, {traj.seed(), config.master_seed, replica, config.T_max, hash});
      write_file(dir / (stem + ".csv"), csv.str());
      write_file(dir / (stem + ".json"), side.str());
      summary.csv_files.push_back(dir / (stem + ".csv"));
    }
  }
  return summary;
}

ordered_json oracle_table(const ExactMoments& moments) {
  ordered_json j;
  j["params"] = params_json(moments.params);
  j["t_max"] = moments.t_max;
  ordered_json table = ordered_json::object();
  for (const auto& row : moments.by_time) {
    table[std::to_string(row.t)] = {{"E_Z", row.mean_z},           {"E_Z2", row.mean_z_sq},
                                    {"E_D2", row.gap_sq},          {"E_D4", row.gap_fourth},
                                    {"E_absD", row.gap_abs},       {"mass", row.mass}};
  }
  j["moments"] = table;
  return j;
}

ordered_json cmd_oracle(const ModelParams& params, std::int64_t t_max) {
  return oracle_table(enumerate_exact(params, t_max));
}

Ensemble load_ensemble(const ExperimentConfig& config) {
  const ModelParams params = config.params();
  const std::string hash = simulation_hash(config);
  const fs::path dir = config.out_dir;
  Ensemble ensemble{params, config.master_seed, 0, {}};
  ensemble.trajectories.reserve(static_cast<std::size_t>(config.M));
  for (std::uint64_t r = 0; r < config.M; ++r) {
    const std::string stem = trajectory_stem(hash, r);
    const fs::path csv = dir / (stem + ".csv"), side = dir / (stem + ".json");
    if (!fs::exists(csv) || !fs::exists(side))
      throw IoError("missing trajectory files for replica " + std::to_string(r) + " ('" + csv.string() +
                    "'); run `polya simulate` with the same config first");
    LoadedTrajectory loaded = read_trajectory(csv, side);
    if (loaded.meta.simulation_hash != hash || loaded.meta.replica != r ||
        loaded.meta.master_seed != config.master_seed || !(loaded.trajectory.params() == params))
      throw ConfigError("trajectory '" + side.string() + "' does not match the config (hash " +
                        loaded.meta.simulation_hash + " vs " + hash + ")");
    ensemble.trajectories.push_back(std::move(loaded.trajectory));
  }
  return ensemble;
}

AnalyzeOutcome cmd_analyze(const ExperimentConfig& config, const std::string& command_line) {
  validate(config);
  const fs::path dir = config.out_dir;
  ensure_dir(dir);
  const std::string hash = config_hash(config);

  std::string suffix = hash;
  for (int n = 1; fs::exists(dir / ("report_" + suffix + ".json")); ++n)
    suffix = hash + "." + std::to_string(n);
  const fs::path report_path = dir / ("report_" + suffix + ".json");

  const bool need_data = std::any_of(config.gates.begin(), config.gates.end(),
                                     [](const std::string& g) { return gate_needs_ensemble(g); });
  std::optional<Ensemble> ensemble;
  if (need_data) ensemble = load_ensemble(config);

  AnalyzeOutcome outcome;
  ordered_json results = ordered_json::array();
  const GateOutput output{dir, suffix};
  for (const auto& gate : config.gates) {
    for (const auto& r : run_gate(gate, config, ensemble ? &*ensemble : nullptr, &output)) {
      outcome.all_pass = outcome.all_pass && r.pass;
      results.push_back(r.to_json(command_line));
    }
  }

  ordered_json report;
  report["schema"] = "polya-report/1";
  report["metadata"] = {{"config_hash", hash},
                        {"simulation_hash", simulation_hash(config)},
                        {"master_seed", config.master_seed},
                        {"replicas", config.M},
                        {"params", params_json(config.params())},
                        {"command", command_line},
                        {"config", emit_config(config)}};
  report["gates"] = results;
  report["all_pass"] = outcome.all_pass;
  write_file(report_path, report.dump(2) + "\n");
  outcome.report = std::move(report);
  outcome.report_path = report_path;
  return outcome;
}

void cmd_report(const fs::path& report_path, std::ostream& table, const fs::path& csv_path) {
  std::ifstream in(report_path);
  if (!in) throw IoError("cannot read report '" + report_path.string() + "'");
  ordered_json report;
  try {
    report = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("report '" + report_path.string() + "': " + e.what());
  }
  const auto bound = [](const ordered_json& b) {
    if (b.is_null()) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", b.get<double>());
    return std::string(buf);
  };

  table << "report " << report_path.filename().string() << "  config "
        << report.at("metadata").at("config_hash").get<std::string>() << "\n";
  table << std::left << std::setw(16) << "gate" << std::setw(30) << "statistic" << std::setw(14) << "value"
        << std::setw(12) << "lower" << std::setw(12) << "upper" << "result\n";
  std::ostringstream csv;
  csv << "# index gate statistic value lower upper pass\n";
  std::size_t index = 0;
  for (const auto& g : report.at("gates")) {
    const std::string lower = bound(g.at("threshold").at("lower"));
    const std::string upper = bound(g.at("threshold").at("upper"));
    char value[32];
    std::snprintf(value, sizeof value, "%.6g", g.at("value").get<double>());
    const bool pass = g.at("pass").get<bool>();
    table << std::left << std::setw(16) << g.at("gate").get<std::string>() << std::setw(30)
          << g.at("statistic").get<std::string>() << std::setw(14) << value << std::setw(12) << lower
          << std::setw(12) << upper << (pass ? "PASS" : "FAIL") << "\n";
    char full[40];
    std::snprintf(full, sizeof full, "%.17g", g.at("value").get<double>());
    csv << index++ << ' ' << g.at("gate").get<std::string>() << ' ' << g.at("statistic").get<std::string>()
        << ' ' << full << ' ' << (lower == "-" ? "NaN" : lower) << ' ' << (upper == "-" ? "NaN" : upper)
        << ' ' << (pass ? 1 : 0) << '\n';
  }
  table << (report.at("all_pass").get<bool>() ? "all gates pass\n" : "some gates FAIL\n");
  write_file(csv_path, csv.str());
}

void write_coefficient_csv(std::ostream& out, double alpha, std::int64_t m, std::int64_t t,
                           std::int64_t stride) {
  if (stride < 1) throw ArgumentError("stride must be >= 1");
  const CoefficientTable table = coefficients(alpha, m, t);
  std::string buffer = "k,c\n";
  char buf[64];
  for (std::int64_t k = 1; k <= t + 1; ++k) {
    if ((k - 1) % stride != 0 && k != t + 1) continue;
    std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(k), table.value(k));
    buffer += buf;
  }
  out << buffer;
}

}  // namespace polya
