#include "fragsim/sim_engine.hpp"

#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace fragsim {

void Scenario::validate() const {
  if (n_nodes < 1) {
    throw std::invalid_argument("n_nodes must be at least 1");
  }
  radio.validate();
  if (payload_bytes < 1) {
    throw std::invalid_argument("payload_bytes must be at least 1");
  }
  if (header_bytes < 0) {
    throw std::invalid_argument("header_bytes must be non-negative");
  }
  if (n_fragments < 1) {
    throw std::invalid_argument("n_fragments must be at least 1");
  }
  if (n_fragments > payload_bytes) {
    throw std::invalid_argument("n_fragments must not exceed payload_bytes");
  }
  if (payload_bytes + header_bytes > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument("payload_bytes + header_bytes is too large");
  }
  if (mean_interval <= Duration::zero()) {
    throw std::invalid_argument("mean_interval must be positive");
  }
  if (horizon <= Duration::zero()) {
    throw std::invalid_argument("horizon must be positive");
  }
  if (n_replications < 1) {
    throw std::invalid_argument("n_replications must be at least 1");
  }
}

Timestamp node_next_eligible_time(Timestamp last_end, Duration last_toa,
                                  const DutyCycleLimit& dc) {
  return last_end + duty_cycle_off_time(last_toa, dc);
}

namespace {

// Ready sorts first so a node freed at t sees arrivals at t as queued work.
enum class EventKind : std::uint8_t { ready = 0, arrival = 1 };

struct Event {
  Timestamp time;
  std::uint32_t node;
  EventKind kind;

  friend bool operator>(const Event& a, const Event& b) {
    return std::tie(a.time, a.node, a.kind) > std::tie(b.time, b.node, b.kind);
  }
};

struct NodeState {
  std::deque<std::uint32_t> backlog;
  std::optional<std::uint32_t> in_service;
  int next_fragment = 0;
  /// On air or sitting out the mandatory off time.
  bool engaged = false;
  Timestamp on_air_until{0};
  std::size_t next_arrival = 0;
};

// Per-fragment timing of one fragment plan.
struct PlanTiming {
  std::vector<std::uint16_t> sizes;
  std::vector<Duration> toa;
  std::vector<Duration> pause;
};

PlanTiming plan_timing(const Scenario& scenario, int n_fragments) {
  const FragmentPlan plan = make_fragment_plan(
      scenario.payload_bytes, n_fragments, scenario.header_bytes);
  PlanTiming t;
  for (int size : plan.on_air_sizes) {
    const Duration toa = time_on_air(scenario.radio, size);
    t.sizes.push_back(static_cast<std::uint16_t>(size));
    t.toa.push_back(toa);
    t.pause.push_back(duty_cycle_off_time(toa, scenario.duty_cycle));
  }
  return t;
}

class Engine {
 public:
  Engine(const Scenario& scenario, std::span<const ArrivalStream> arrivals,
         std::span<const int> fragments_per_node, ReplicationLog& log)
      : scenario_{scenario}, arrivals_{arrivals}, log_{log},
        nodes_(arrivals.size()), node_plan_(arrivals.size(), 0) {
    plans_.push_back(plan_timing(scenario, scenario.n_fragments));
    for (std::size_t n = 0; n < fragments_per_node.size(); ++n) {
      if (fragments_per_node[n] != scenario.n_fragments) {
        plans_.push_back(plan_timing(scenario, fragments_per_node[n]));
        node_plan_[n] = plans_.size() - 1;
      }
    }
    std::size_t expected = 0;
    for (const auto& s : arrivals) {
      expected += s.arrival_times.size();
    }
    log_.packets.resize(arrivals.size());
    for (std::size_t n = 0; n < arrivals.size(); ++n) {
      log_.packets[n].reserve(arrivals[n].arrival_times.size());
    }
    log_.records.reserve(std::min<std::size_t>(
        expected * plans_.front().sizes.size(), std::size_t{1} << 24));
  }

  void run() {
    for (std::uint32_t n = 0; n < nodes_.size(); ++n) {
      schedule_arrival(n);
    }
    const Timestamp horizon = scenario_.horizon;
    while (!events_.empty() && events_.top().time < horizon) {
      const Event ev = events_.top();
      events_.pop();
      if (ev.kind == EventKind::arrival) {
        on_arrival(ev.node, ev.time);
      } else {
        on_ready(ev.node, ev.time);
      }
    }
  }

 private:
  void schedule_arrival(std::uint32_t node) {
    NodeState& st = nodes_[node];
    const auto& times = arrivals_[node].arrival_times;
    if (st.next_arrival < times.size()) {
      events_.push({times[st.next_arrival], node, EventKind::arrival});
    }
  }

  void on_arrival(std::uint32_t node, Timestamp now) {
    NodeState& st = nodes_[node];
    ++st.next_arrival;
    auto& packets = log_.packets[node];
    const auto id = static_cast<std::uint32_t>(packets.size());
    packets.push_back(PacketOutcome{.generated = now});
    ++log_.packets_generated;

    const bool pending = st.in_service.has_value() || now < st.on_air_until ||
                         !st.backlog.empty();
    if (scenario_.queue_policy == QueuePolicy::drop && pending) {
      packets.back().dropped = true;
    } else {
      st.backlog.push_back(id);
      if (!st.engaged) {
        transmit_next(node, now);
      }
    }
    schedule_arrival(node);
  }

  void on_ready(std::uint32_t node, Timestamp now) {
    nodes_[node].engaged = false;
    transmit_next(node, now);
  }

  // Caller guarantees the node is idle and past its off time.
  void transmit_next(std::uint32_t node, Timestamp now) {
    NodeState& st = nodes_[node];
    if (!st.in_service) {
      if (st.backlog.empty()) {
        return;
      }
      st.in_service = st.backlog.front();
      st.backlog.pop_front();
      st.next_fragment = 0;
    }

    const PlanTiming& plan = plans_[node_plan_[node]];
    const auto frag = static_cast<std::size_t>(st.next_fragment);
    const Timestamp end = now + plan.toa[frag];
    log_.records.push_back(TransmissionRecord{
        .node_id = node,
        .packet_id = *st.in_service,
        .fragment_index = static_cast<std::uint16_t>(frag),
        .on_air_bytes = plan.sizes[frag],
        .start = now,
        .end = end,
    });

    PacketOutcome& pkt = log_.packets[node][*st.in_service];
    ++pkt.fragments_sent;
    if (frag + 1 == plan.sizes.size()) {
      pkt.completed = end;
      pkt.complete = end <= scenario_.horizon;
      if (pkt.complete) {
        ++log_.packets_completed;
      }
      st.in_service.reset();
    } else {
      ++st.next_fragment;
    }

    st.engaged = true;
    st.on_air_until = end;
    events_.push({end + plan.pause[frag], node, EventKind::ready});
  }

  const Scenario& scenario_;
  std::span<const ArrivalStream> arrivals_;
  ReplicationLog& log_;
  std::vector<NodeState> nodes_;
  std::vector<PlanTiming> plans_;
  std::vector<std::size_t> node_plan_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
};

}  // namespace

ReplicationLog run_replication(const Scenario& scenario,
                               std::uint64_t replication_index,
                               std::span<const ArrivalStream> arrivals,
                               std::span<const int> fragments_per_node) {
  scenario.validate();
  if (arrivals.size() != static_cast<std::size_t>(scenario.n_nodes)) {
    throw std::invalid_argument("expected one arrival stream per node (" +
                                std::to_string(scenario.n_nodes) + "), got " +
                                std::to_string(arrivals.size()));
  }
  if (!fragments_per_node.empty() &&
      fragments_per_node.size() != arrivals.size()) {
    throw std::invalid_argument("fragments_per_node needs one entry per node");
  }
  for (int f : fragments_per_node) {
    if (f < 1 || f > scenario.payload_bytes) {
      throw std::invalid_argument(
          "fragments_per_node entries must be in [1, payload_bytes]");
    }
  }
  ReplicationLog log;
  log.scenario = scenario;
  log.replication_index = replication_index;

  Engine{scenario, arrivals, fragments_per_node, log}.run();

  detect_collisions(log.records);
  for (const TransmissionRecord& r : log.records) {
    if (r.collided) {
      log.packets[r.node_id][r.packet_id].damaged = true;
    }
  }
  return log;
}

ReplicationLog run_replication(const Scenario& scenario,
                               std::uint64_t replication_index) {
  scenario.validate();
  std::vector<ArrivalStream> arrivals;
  arrivals.reserve(static_cast<std::size_t>(scenario.n_nodes));
  for (int n = 0; n < scenario.n_nodes; ++n) {
    arrivals.push_back(generate_arrivals(
        scenario.base_seed, replication_index, static_cast<std::uint32_t>(n),
        scenario.mean_interval, scenario.horizon, scenario.arrival_law));
  }
  return run_replication(scenario, replication_index, arrivals);
}

}  // namespace fragsim
