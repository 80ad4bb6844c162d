#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "polya/simulate.hpp"

namespace polya {

/// Contents of the JSON sidecar written next to each trajectory CSV.
struct TrajectoryMeta {
  std::uint64_t seed = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t replica = 0;
  std::int64_t horizon = 0;
  std::string simulation_hash;
};

/// CSV with header `t,urn,Z,Zbar,D,L`: one line per recorded time per urn
/// (urns numbered from 0), Zbar repeated on every urn line, floats printed
/// with 17 significant digits so they read back bit-exactly.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Sidecar: {"format", "params": {N, a, b, alpha}, "seed", "master_seed",
/// "replica", "horizon", "record_times", "simulation_hash"}.
void write_trajectory_sidecar(std::ostream& out, const Trajectory& trajectory,
                              const TrajectoryMeta& meta);

struct LoadedTrajectory {
  Trajectory trajectory;
  TrajectoryMeta meta;
};

/// Reads a CSV/sidecar pair back. Throws IoError on missing files and
/// ConfigError on malformed or mutually inconsistent content.
LoadedTrajectory read_trajectory(const std::filesystem::path& csv_path,
                                 const std::filesystem::path& sidecar_path);

/// `traj_<simulation hash>_r<replica, 6 digits>` (without extension).
std::string trajectory_stem(const std::string& simulation_hash, std::uint64_t replica);

}  // namespace polya
