#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fragsim/time.hpp"

namespace fragsim {

/// Application-packet generation instants of one node, strictly increasing
/// and inside [0, horizon).
struct ArrivalStream {
  std::uint32_t node_id = 0;
  std::vector<Timestamp> arrival_times;
};

enum class ArrivalLaw {
  /// Exponential gaps with the given mean.
  poisson,
  /// Fixed gap equal to the mean, uniformly random phase in [0, mean).
  periodic,
};

/// The stream is a pure function of (seed, replication_index, node_id).
ArrivalStream generate_arrivals(std::uint64_t seed,
                                std::uint64_t replication_index,
                                std::uint32_t node_id, Duration mean_interval,
                                Duration horizon,
                                ArrivalLaw law = ArrivalLaw::poisson);

/// Wraps a hand-written schedule. Throws std::invalid_argument on negative
/// or non-increasing times.
ArrivalStream fixed_schedule(std::span<const Timestamp> times,
                             std::uint32_t node_id = 0);
ArrivalStream fixed_schedule_seconds(std::span<const double> times,
                                     std::uint32_t node_id = 0);

}  // namespace fragsim
