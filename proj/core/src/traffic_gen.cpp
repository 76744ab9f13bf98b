#include "fragsim/traffic_gen.hpp"

#include <algorithm>
#include <stdexcept>

#include "fragsim/rng.hpp"

namespace fragsim {

ArrivalStream generate_arrivals(std::uint64_t seed,
                                std::uint64_t replication_index,
                                std::uint32_t node_id, Duration mean_interval,
                                Duration horizon, ArrivalLaw law) {
  if (mean_interval <= Duration::zero()) {
    throw std::invalid_argument("mean_interval must be positive");
  }
  if (horizon <= Duration::zero()) {
    throw std::invalid_argument("horizon must be positive");
  }

  SplitMix64 rng{hash_combine({seed, replication_index, node_id})};
  ArrivalStream stream;
  stream.node_id = node_id;
  stream.arrival_times.reserve(
      static_cast<std::size_t>(horizon / mean_interval) + 16);

  const double mean_ns = static_cast<double>(mean_interval.count());
  if (law == ArrivalLaw::periodic) {
    Timestamp t{static_cast<std::int64_t>(
        mean_ns * (1.0 - rng.uniform_open_closed()))};
    for (; t < horizon; t += mean_interval) {
      stream.arrival_times.push_back(t);
    }
    return stream;
  }

  // Gaps are clamped to 1 ns so that rounding never produces a tie.
  Timestamp t{0};
  bool first = true;
  for (;;) {
    const auto gap = static_cast<std::int64_t>(rng.exponential(mean_ns) + 0.5);
    t += Duration{first ? gap : std::max<std::int64_t>(gap, 1)};
    first = false;
    if (t >= horizon) {
      break;
    }
    stream.arrival_times.push_back(t);
  }
  return stream;
}

ArrivalStream fixed_schedule(std::span<const Timestamp> times,
                             std::uint32_t node_id) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < Timestamp::zero()) {
      throw std::invalid_argument("fixed schedule contains a negative time");
    }
    if (i > 0 && times[i] <= times[i - 1]) {
      throw std::invalid_argument(
          "fixed schedule must be strictly increasing");
    }
  }
  return ArrivalStream{node_id, {times.begin(), times.end()}};
}

ArrivalStream fixed_schedule_seconds(std::span<const double> times,
                                     std::uint32_t node_id) {
  std::vector<Timestamp> ns;
  ns.reserve(times.size());
  for (double t : times) {
    if (t < 0.0) {
      throw std::invalid_argument("fixed schedule contains a negative time");
    }
    ns.push_back(from_seconds(t));
  }
  return fixed_schedule(ns, node_id);
}

}  // namespace fragsim
