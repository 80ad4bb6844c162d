#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polya/params.hpp"

namespace polya {

/// Recorded history of one replica. Row r belongs to time record_times[r] and
/// stores, for N urns, the fractions Z(i), the mean fraction, the gaps D(j)
/// and the compensator L(j).
class Trajectory {
public:
  Trajectory(ModelParams params, std::vector<std::int64_t> record_times,
             std::uint64_t seed);

  const ModelParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<std::int64_t>& record_times() const noexcept { return times_; }
  std::size_t rows() const noexcept { return times_.size(); }
  std::size_t urns() const noexcept { return urns_; }

  /// Row index of time t; throws PreconditionError if t was not recorded.
  std::size_t row_of(std::int64_t t) const;
  bool has_time(std::int64_t t) const noexcept;

  double fraction(std::size_t row, std::size_t urn) const noexcept { return at(row, urn); }
  double mean_fraction(std::size_t row) const noexcept { return at(row, urns_); }
  double gap(std::size_t row, std::size_t urn) const noexcept { return at(row, urns_ + 1 + urn); }
  double compensator(std::size_t row, std::size_t urn) const noexcept {
    return at(row, 2 * urns_ + 1 + urn);
  }
  std::span<const double> fractions(std::size_t row) const noexcept {
    return {data_.data() + row * stride(), urns_};
  }
  std::span<const double> gaps(std::size_t row) const noexcept {
    return {data_.data() + row * stride() + urns_ + 1, urns_};
  }
  std::span<const double> compensators(std::size_t row) const noexcept {
    return {data_.data() + row * stride() + 2 * urns_ + 1, urns_};
  }

  /// Overwrites row `row`. Spans must have length urns().
  void set_row(std::size_t row, std::span<const double> fractions, double mean_fraction,
               std::span<const double> gaps, std::span<const double> compensators);

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
  std::size_t stride() const noexcept { return 3 * urns_ + 1; }
  double at(std::size_t row, std::size_t col) const noexcept { return data_[row * stride() + col]; }

  ModelParams params_;
  std::vector<std::int64_t> times_;
  std::uint64_t seed_;
  std::size_t urns_;
  std::vector<double> data_;
};

/// Replicas [first_replica, first_replica + size()) of the ensemble defined by
/// (params, master_seed). Replica r always uses derive_seed(master_seed, r).
struct Ensemble {
  ModelParams params;
  std::uint64_t master_seed = 0;
  std::uint64_t first_replica = 0;
  std::vector<Trajectory> trajectories;

  std::size_t size() const noexcept { return trajectories.size(); }
};

struct EnsembleOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 1;
  /// Index of the first replica to generate. Lets large ensembles be
  /// produced block by block with the same per-replica streams.
  std::uint64_t first_replica = 0;
};

/// Runs `horizon` steps from the initial state and records rows at the
/// (strictly increasing) `record_times`. Deterministic in (params, seed).
Trajectory simulate(const ModelParams& params, std::int64_t horizon,
                    std::span<const std::int64_t> record_times, std::uint64_t seed);

/// M independent replicas. Output is bit-identical for every thread count.
Ensemble simulate_ensemble(const ModelParams& params, std::size_t replicas,
                           std::int64_t horizon, std::span<const std::int64_t> record_times,
                           std::uint64_t master_seed, const EnsembleOptions& options = {});

/// Geometric recording grid on [0, horizon]: t = 0, then about `per_decade`
/// points per decade rounded to integers (duplicates removed), always ending
/// at horizon. `extra` times are merged in.
std::vector<std::int64_t> geometric_grid(std::int64_t horizon, int per_decade,
                                         std::span<const std::int64_t> extra = {});

}  // namespace polya
