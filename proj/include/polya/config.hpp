#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polya/params.hpp"

namespace polya {

/// Gates understood by the analyzer.
inline const std::vector<std::string>& known_gates() {
  static const std::vector<std::string> gates{
      "scaling",     "martingale", "clt-s1",     "clt-s2",    "clt-s2-control",
      "clt-s3",      "clt-s4",     "sub-limit",  "covariance", "ci-coverage",
      "alpha-est",   "coefficients", "recursion"};
  return gates;
}

/// One experiment: model, ensemble, recording grid, analysis selection and
/// the per-gate times. Text form is flat `key = value` lines; see
/// docs/config.md for the key list.
struct ExperimentConfig {
  std::int64_t N = 2;
  std::int64_t a = 1;
  std::int64_t b = 1;
  double alpha = 0.5;

  std::uint64_t M = 1;
  std::uint64_t master_seed = 0;

  std::int64_t T_max = 10;
  int grid_per_decade = 40;
  std::vector<std::int64_t> extra_times;

  std::vector<std::string> gates;
  std::string out_dir = "out";
  unsigned threads = 1;

  std::int64_t urn = 0;
  std::int64_t scaling_t_lo = 200;
  std::int64_t scaling_t_hi = 5000;
  std::int64_t martingale_t_max = 10000;
  std::int64_t clt_t = 2000;
  std::int64_t clt_T = 200000;
  double proxy_ratio = 100.0;
  std::int64_t sub_t1 = 50000;
  std::int64_t sub_t2 = 100000;
  std::int64_t cov_t = 2000;
  std::int64_t ci_t = 10000;
  std::int64_t ci_T = 1000000;
  double ci_level = 0.95;
  std::int64_t alpha_t = 10000;
  std::int64_t coef_t = 1000000;
  std::vector<double> coef_alphas{0.3, 0.7, 1.0};
  std::int64_t recursion_instances = 100;
  std::uint64_t recursion_seed = 20140601;

  ModelParams params() const { return ModelParams(N, a, b, alpha); }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses config text. Unknown or repeated keys, malformed values and
/// inconsistent settings raise ConfigError naming the line or key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

/// Throws ConfigError if the config is inconsistent (bad model params, times
/// beyond T_max, gate preconditions that contradict alpha, ...).
void validate(const ExperimentConfig& config);

/// Recorded times: geometric grid up to T_max, extra_times, and every gate
/// time key that is <= T_max.
std::vector<std::int64_t> recording_grid(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical text minus execution-only keys (out_dir,
/// threads), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Hash of everything that determines the trajectory files: model, M,
/// master_seed, T_max and the recording grid.
std::string simulation_hash(const ExperimentConfig& config);

}  // namespace polya
