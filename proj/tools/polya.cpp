// Command-line front end: simulate, oracle, analyze, report, coefficients.
//
// Exit codes: 0 success / all gates pass, 1 some gate failed, 2 usage,
// configuration or I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polya/commands.hpp"
#include "polya/config.hpp"
#include "polya/error.hpp"

namespace {

constexpr int kExitGateFailure = 1;
constexpr int kExitUsage = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "experiment config file")->required();
  cmd->add_option("--out", o.out, "output directory (overrides out_dir)");
  cmd->add_option("--threads", o.threads, "worker threads (overrides threads)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed (overrides master_seed)");
}

polya::ExperimentConfig resolve(const Overrides& o) {
  polya::ExperimentConfig config = polya::load_config(o.config_path);
  if (o.out) config.out_dir = *o.out;
  if (o.threads) config.threads = *o.threads;
  if (o.seed) config.master_seed = *o.seed;
  polya::validate(config);
  return config;
}

std::string join_argv(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification toolkit for mean-field interacting Polya urns"};
  app.require_subcommand(1);

  Overrides sim_opts, analyze_opts;
  auto* simulate = app.add_subcommand("simulate", "simulate an ensemble and write trajectory files");
  add_common(simulate, sim_opts);

  auto* analyze = app.add_subcommand("analyze", "run the configured gates on stored trajectories");
  add_common(analyze, analyze_opts);

  auto* oracle = app.add_subcommand("oracle", "exact small-horizon moments by full enumeration");
  std::string oracle_config;
  std::int64_t n = 2, a = 1, b = 1, t_max = 0;
  double alpha = 0.5;
  std::optional<std::string> oracle_out;
  oracle->add_option("--config", oracle_config, "take N, a, b, alpha from a config file");
  oracle->add_option("--N", n, "number of urns");
  oracle->add_option("--a", a, "initial red balls per urn");
  oracle->add_option("--b", b, "initial black balls per urn");
  oracle->add_option("--alpha", alpha, "interaction strength");
  oracle->add_option("--t-max", t_max, "largest time")->required();
  oracle->add_option("--out", oracle_out, "write the JSON table here instead of stdout");

  auto* report = app.add_subcommand("report", "render a report as a table and gnuplot-ready CSV");
  std::string report_path;
  std::optional<std::string> report_csv;
  report->add_option("report", report_path, "report JSON file")->required()->check(CLI::ExistingFile);
  report->add_option("--csv", report_csv, "CSV output path (default: report path with .dat)");

  auto* coef = app.add_subcommand("coefficients", "dump the product coefficients c_{k,t} as CSV");
  double coef_alpha = 0.7;
  std::int64_t coef_m = 2, coef_t = 1000, stride = 1;
  std::optional<std::string> coef_out;
  coef->add_option("--alpha", coef_alpha, "alpha in (0, 1]")->required();
  coef->add_option("--m", coef_m, "initial balls per urn, a + b")->required();
  coef->add_option("--t", coef_t, "horizon t")->required();
  coef->add_option("--stride", stride, "emit every stride-th k");
  coef->add_option("--out", coef_out, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const std::string command_line = join_argv(argc, argv);
  try {
    if (*simulate) {
      const auto config = resolve(sim_opts);
      const auto summary = polya::cmd_simulate(config);
      std::cout << "wrote " << summary.csv_files.size() << " trajectories (simulation "
                << summary.simulation_hash << ") to " << config.out_dir << "\n";
      return 0;
    }
    if (*analyze) {
      const auto config = resolve(analyze_opts);
      const auto outcome = polya::cmd_analyze(config, command_line);
      std::cout << "report: " << outcome.report_path.string() << "\n";
      for (const auto& g : outcome.report.at("gates"))
        std::cout << (g.at("pass").get<bool>() ? "PASS " : "FAIL ") << g.at("gate").get<std::string>()
                  << " " << g.at("statistic").get<std::string>() << " = " << g.at("value").dump() << "\n";
      return outcome.all_pass ? 0 : kExitGateFailure;
    }
    if (*oracle) {
      std::optional<polya::ModelParams> params;
      if (!oracle_config.empty())
        params = polya::load_config(oracle_config).params();
      else
        params.emplace(n, a, b, alpha);
      const std::string text = polya::cmd_oracle(*params, t_max).dump(2) + "\n";
      if (oracle_out) {
        std::ofstream out(*oracle_out);
        if (!out) throw polya::IoError("cannot write '" + *oracle_out + "'");
        out << text;
      } else {
        std::cout << text;
      }
      return 0;
    }
    if (*report) {
      std::filesystem::path csv = report_csv ? std::filesystem::path(*report_csv)
                                             : std::filesystem::path(report_path).replace_extension(".dat");
      polya::cmd_report(report_path, std::cout, csv);
      return 0;
    }
    if (*coef) {
      if (coef_out) {
        std::ofstream out(*coef_out);
        if (!out) throw polya::IoError("cannot write '" + *coef_out + "'");
        polya::write_coefficient_csv(out, coef_alpha, coef_m, coef_t, stride);
      } else {
        polya::write_coefficient_csv(std::cout, coef_alpha, coef_m, coef_t, stride);
      }
      return 0;
    }
  } catch (const polya::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
