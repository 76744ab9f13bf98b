#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fragsim/fragmenter.hpp"
#include "fragsim/phy_toa.hpp"
#include "fragsim/time.hpp"
#include "fragsim/traffic_gen.hpp"

namespace fragsim {

/// What a node does with a packet generated while it still has one pending.
enum class QueuePolicy {
  /// Unbounded FIFO backlog.
  fifo,
  /// Discard the new packet.
  drop,
};

/// One simulated network configuration: N nodes in a star around a single
/// gateway, sharing one pure-Aloha channel.
struct Scenario {
  int n_nodes = 1;
  RadioConfig radio = RadioConfig::with_defaults(7);
  int payload_bytes = 250;
  int header_bytes = 1;
  int n_fragments = 1;
  Duration mean_interval = std::chrono::seconds{10};
  DutyCycleLimit duty_cycle = DutyCycleLimit::percent(1.0);
  Duration horizon = std::chrono::seconds{10000};
  int n_replications = 300;
  std::uint64_t base_seed = 1;
  QueuePolicy queue_policy = QueuePolicy::fifo;
  ArrivalLaw arrival_law = ArrivalLaw::poisson;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  FragmentPlan fragment_plan() const {
    return make_fragment_plan(payload_bytes, n_fragments, header_bytes);
  }
};

/// One on-air interval [start, end).
struct TransmissionRecord {
  std::uint32_t node_id = 0;
  std::uint32_t packet_id = 0;
  std::uint16_t fragment_index = 0;
  std::uint16_t on_air_bytes = 0;
  Timestamp start{0};
  Timestamp end{0};
  bool collided = false;
};

struct PacketOutcome {
  Timestamp generated{0};
  /// End of the last fragment; meaningful once all fragments were sent.
  Timestamp completed{0};
  std::uint16_t fragments_sent = 0;
  /// All fragments on air and the last one ended by the horizon.
  bool complete = false;
  bool damaged = false;
  bool dropped = false;

  bool delivered() const { return complete && !damaged; }
};

struct ReplicationLog {
  Scenario scenario;
  std::uint64_t replication_index = 0;
  /// Ordered by start time.
  std::vector<TransmissionRecord> records;
  /// packets[node_id][packet_id]
  std::vector<std::vector<PacketOutcome>> packets;
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_completed = 0;
};

/// Marks every record whose half-open interval intersects another record's
/// interval; clears the flag on the rest. Touching endpoints do not collide.
/// O(n) on start-ordered input, O(n log n) otherwise.
void detect_collisions(std::span<TransmissionRecord> records);

/// last_end + duty_cycle_off_time(last_toa, dc).
Timestamp node_next_eligible_time(Timestamp last_end, Duration last_toa,
                                  const DutyCycleLimit& dc);

/// Runs one replication with arrivals drawn from the scenario's traffic law.
ReplicationLog run_replication(const Scenario& scenario,
                               std::uint64_t replication_index);

/// Runs one replication with caller-supplied arrivals, one stream per node
/// (stream i drives node i). fragments_per_node, when not empty, overrides
/// scenario.n_fragments node by node.
ReplicationLog run_replication(const Scenario& scenario,
                               std::uint64_t replication_index,
                               std::span<const ArrivalStream> arrivals,
                               std::span<const int> fragments_per_node = {});

}  // namespace fragsim
