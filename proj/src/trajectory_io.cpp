#include "polya/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "polya/error.hpp"

namespace polya {
namespace {

constexpr const char* kFormat = "polya-trajectory/1";
constexpr const char* kHeader = "t,urn,Z,Zbar,D,L";

void put_double(std::string& line, double x) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  line.append(buf, static_cast<std::size_t>(len));
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::int64_t to_int(std::string_view cell, const std::string& where) {
  std::int64_t v{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw ConfigError(where + ": bad integer '" + std::string(cell) + "'");
  return v;
}

double to_double(std::string_view cell, const std::string& where) {
  const std::string s(cell);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigError(where + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  std::string buffer = std::string(kHeader) + "\n";
  for (std::size_t row = 0; row < traj.rows(); ++row) {
    const std::string t = std::to_string(traj.record_times()[row]);
    for (std::size_t j = 0; j < traj.urns(); ++j) {
      buffer += t;
      buffer += ',';
      buffer += std::to_string(j);
      buffer += ',';
      put_double(buffer, traj.fraction(row, j));
      buffer += ',';
      put_double(buffer, traj.mean_fraction(row));
      buffer += ',';
      put_double(buffer, traj.gap(row, j));
      buffer += ',';
      put_double(buffer, traj.compensator(row, j));
      buffer += '\n';
    }
  }
  out << buffer;
}

void write_trajectory_sidecar(std::ostream& out, const Trajectory& traj, const TrajectoryMeta& meta) {
  const auto& p = traj.params();
  nlohmann::ordered_json j;
  j["format"] = kFormat;
  j["params"] = {{"N", p.urns()}, {"a", p.initial_red()}, {"b", p.initial_black()}, {"alpha", p.alpha()}};
  j["seed"] = traj.seed();
  j["master_seed"] = meta.master_seed;
  j["replica"] = meta.replica;
  j["horizon"] = meta.horizon;
  j["record_times"] = traj.record_times();
  j["simulation_hash"] = meta.simulation_hash;
  out << j.dump(2) << "\n";
}

LoadedTrajectory read_trajectory(const std::filesystem::path& csv_path,
                                 const std::filesystem::path& sidecar_path) {
  std::ifstream side(sidecar_path);
  if (!side) throw IoError("missing trajectory sidecar '" + sidecar_path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(side);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("sidecar '" + sidecar_path.string() + "': " + e.what());
  }
  const std::string where = sidecar_path.string();
  try {
    if (j.at("format") != kFormat) throw ConfigError(where + ": unsupported format");
    const auto& p = j.at("params");
    const ModelParams params(p.at("N").get<std::int64_t>(), p.at("a").get<std::int64_t>(),
                             p.at("b").get<std::int64_t>(), p.at("alpha").get<double>());
    TrajectoryMeta meta;
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.master_seed = j.at("master_seed").get<std::uint64_t>();
    meta.replica = j.at("replica").get<std::uint64_t>();
    meta.horizon = j.at("horizon").get<std::int64_t>();
    meta.simulation_hash = j.at("simulation_hash").get<std::string>();
    Trajectory traj(params, j.at("record_times").get<std::vector<std::int64_t>>(), meta.seed);

    std::ifstream csv(csv_path);
    if (!csv) throw IoError("missing trajectory file '" + csv_path.string() + "'");
    std::string line;
    if (!std::getline(csv, line) || line != kHeader)
      throw ConfigError(csv_path.string() + ": expected header '" + kHeader + "'");
    const std::size_t n = params.urn_count();
    std::vector<double> z(n), d(n), l(n);
    std::size_t line_no = 1;
    for (std::size_t row = 0; row < traj.rows(); ++row) {
      double zbar = 0.0;
      for (std::size_t urn = 0; urn < n; ++urn) {
        ++line_no;
        const std::string at = csv_path.string() + ":" + std::to_string(line_no);
        if (!std::getline(csv, line)) throw ConfigError(at + ": file ends early");
        const auto cells = split_csv(line);
        if (cells.size() != 6) throw ConfigError(at + ": expected 6 columns");
        if (to_int(cells[0], at) != traj.record_times()[row] ||
            to_int(cells[1], at) != static_cast<std::int64_t>(urn))
          throw ConfigError(at + ": rows out of order or inconsistent with the sidecar");
        z[urn] = to_double(cells[2], at);
        zbar = to_double(cells[3], at);
        d[urn] = to_double(cells[4], at);
        l[urn] = to_double(cells[5], at);
      }
      traj.set_row(row, z, zbar, d, l);
    }
    if (std::getline(csv, line) && !line.empty())
      throw ConfigError(csv_path.string() + ": trailing rows beyond the sidecar's record times");
    return {std::move(traj), std::move(meta)};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

std::string trajectory_stem(const std::string& simulation_hash, std::uint64_t replica) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_r%06llu", static_cast<unsigned long long>(replica));
  return "traj_" + simulation_hash + buf;
}

}  // namespace polya
