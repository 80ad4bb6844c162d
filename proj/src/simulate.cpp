#include "polya/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "polya/compensator.hpp"
#include "polya/error.hpp"
#include "polya/rng.hpp"
#include "polya/state.hpp"

namespace polya {

Trajectory::Trajectory(ModelParams params, std::vector<std::int64_t> record_times,
                       std::uint64_t seed)
    : params_(params), times_(std::move(record_times)), seed_(seed),
      urns_(params.urn_count()), data_(times_.size() * (3 * urns_ + 1), 0.0) {
  if (times_.empty()) throw ArgumentError("record_times must be nonempty");
  if (times_.front() < 0) throw ArgumentError("record_times must be nonnegative");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (times_[i] <= times_[i - 1])
      throw ArgumentError("record_times must be strictly increasing (" +
                          std::to_string(times_[i - 1]) + " then " + std::to_string(times_[i]) +
                          ")");
}

std::size_t Trajectory::row_of(std::int64_t t) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.end() || *it != t)
    throw PreconditionError("time " + std::to_string(t) + " was not recorded");
  return static_cast<std::size_t>(it - times_.begin());
}

bool Trajectory::has_time(std::int64_t t) const noexcept {
  return std::binary_search(times_.begin(), times_.end(), t);
}

void Trajectory::set_row(std::size_t row, std::span<const double> fractions,
                         double mean_fraction, std::span<const double> gaps,
                         std::span<const double> compensators) {
  if (fractions.size() != urns_ || gaps.size() != urns_ || compensators.size() != urns_)
    throw ArgumentError("row spans must have one entry per urn");
  double* out = data_.data() + row * stride();
  std::copy(fractions.begin(), fractions.end(), out);
  out[urns_] = mean_fraction;
  std::copy(gaps.begin(), gaps.end(), out + urns_ + 1);
  std::copy(compensators.begin(), compensators.end(), out + 2 * urns_ + 1);
}

namespace {

void record(Trajectory& traj, std::size_t row, const UrnSystemState& state,
            const CompensatorState& comp, const ModelParams& params,
            std::vector<double>& fractions, std::vector<double>& gaps) {
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    fractions[i] = state.fraction(i, params);
    gaps[i] = state.gap(i, params);
  }
  traj.set_row(row, fractions, state.mean_fraction(params), gaps, comp.level);
}

}  // namespace

Trajectory simulate(const ModelParams& params, std::int64_t horizon,
                    std::span<const std::int64_t> record_times, std::uint64_t seed) {
  Trajectory traj(params, {record_times.begin(), record_times.end()}, seed);
  if (horizon < record_times.back())
    throw ArgumentError("horizon " + std::to_string(horizon) + " is before the last record time " +
                        std::to_string(record_times.back()));

  Rng rng(seed);
  UrnSystemState state = UrnSystemState::initial(params);
  CompensatorState comp = CompensatorState::initial(params);
  std::vector<double> fractions(params.urn_count()), gaps(params.urn_count());

  std::size_t next_row = 0;
  if (record_times.front() == 0) record(traj, next_row++, state, comp, params, fractions, gaps);

  const std::int64_t last = record_times.back();
  while (state.t < last) {
    comp.accumulate(state, params);
    advance(state, params, rng);
    if (state.t == record_times[next_row]) {
      comp.refresh(state, params);
      record(traj, next_row++, state, comp, params, fractions, gaps);
    }
  }
  // Steps beyond the last record time cannot change any recorded row.
  return traj;
}

Ensemble simulate_ensemble(const ModelParams& params, std::size_t replicas,
                           std::int64_t horizon, std::span<const std::int64_t> record_times,
                           std::uint64_t master_seed, const EnsembleOptions& options) {
  if (replicas < 1) throw ArgumentError("ensemble needs at least one replica");
  if (record_times.empty()) throw ArgumentError("record_times must be nonempty");
  if (horizon < record_times.back())
    throw ArgumentError("horizon " + std::to_string(horizon) + " is before the last record time " +
                        std::to_string(record_times.back()));

  const auto run = [&](std::size_t i) {
    const std::uint64_t r = options.first_replica + i;
    return simulate(params, horizon, record_times, derive_seed(master_seed, r));
  };

  Ensemble ensemble{params, master_seed, options.first_replica, {}};
  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(replicas)));

  if (threads == 1) {
    ensemble.trajectories.reserve(replicas);
    for (std::size_t i = 0; i < replicas; ++i) ensemble.trajectories.push_back(run(i));
    return ensemble;
  }

  // Each worker writes only its own slots, so the result does not depend on
  // scheduling.
  std::vector<std::optional<Trajectory>> slots(replicas);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < replicas; i = next++) slots[i].emplace(run(i));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  ensemble.trajectories.reserve(replicas);
  for (auto& slot : slots) ensemble.trajectories.push_back(std::move(*slot));
  return ensemble;
}

std::vector<std::int64_t> geometric_grid(std::int64_t horizon, int per_decade,
                                         std::span<const std::int64_t> extra) {
  if (horizon < 0) throw ArgumentError("horizon must be nonnegative");
  if (per_decade < 1) throw ArgumentError("grid needs at least one point per decade");
  std::vector<std::int64_t> grid{0};
  if (horizon >= 1) {
    const double decades = std::log10(static_cast<double>(horizon));
    const int points = static_cast<int>(std::ceil(decades * per_decade));
    for (int k = 0; k <= points; ++k) {
      const double x = std::pow(10.0, static_cast<double>(k) / per_decade);
      const auto t = std::min<std::int64_t>(horizon, std::llround(x));
      grid.push_back(t);
    }
    grid.push_back(horizon);
  }
  for (std::int64_t t : extra) {
    if (t < 0 || t > horizon)
      throw ArgumentError("extra record time " + std::to_string(t) + " outside [0, " +
                          std::to_string(horizon) + "]");
    grid.push_back(t);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace polya
