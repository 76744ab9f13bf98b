#include <stdexcept>
#include <map>

#include "doctest.h"
#include "fragsim/metrics.hpp"
#include "fragsim/sim_engine.hpp"
#include "oracles.hpp"

using namespace fragsim;
using namespace std::chrono_literals;

namespace {

Scenario base(int nodes, int fragments, DutyCycleLimit dc, int sf = 7) {
  Scenario s;
  s.n_nodes = nodes;
  s.n_fragments = fragments;
  s.duty_cycle = dc;
  s.radio = RadioConfig::with_defaults(sf);
  s.horizon = 3600s;
  s.n_replications = 1;
  return s;
}

std::vector<ArrivalStream> streams(std::initializer_list<std::vector<double>> per_node) {
  std::vector<ArrivalStream> out;
  std::uint32_t id = 0;
  for (const auto& times : per_node) {
    out.push_back(fixed_schedule_seconds(times, id++));
  }
  return out;
}

const auto kFree = DutyCycleLimit::unrestricted();
const auto kOnePct = DutyCycleLimit::percent(1.0);

}  // namespace

TEST_CASE("node_next_eligible_time") {
  CHECK(node_next_eligible_time(Timestamp{10s}, from_seconds(0.4), kOnePct) ==
        from_seconds(49.6));
  CHECK(node_next_eligible_time(Timestamp{10s}, from_seconds(0.4), kFree) ==
        Timestamp{10s});
  CHECK(node_next_eligible_time(from_seconds(9.02), from_seconds(9.02), kOnePct) ==
        from_seconds(902.0));
}

TEST_CASE("a lone node never collides") {
  for (const auto& dc : {kFree, kOnePct}) {
    for (int frags : {1, 2, 10, 50}) {
      const auto log = run_replication(base(1, frags, dc), 3);
      CHECK_FALSE(log.records.empty());
      for (const auto& r : log.records) {
        CHECK_FALSE(r.collided);
      }
      for (const auto& p : log.packets[0]) {
        if (p.complete) {
          CHECK(p.delivered());
        }
      }
      CHECK(compute_goodput(log) == 100.0);
    }
  }
}

TEST_CASE("two simultaneous unfragmented packets destroy each other") {
  const Scenario s = base(2, 1, kFree);
  const auto log = run_replication(s, 0, streams({{0.0}, {0.0}}));
  REQUIRE(log.records.size() == 2);
  CHECK(log.records[0].collided);
  CHECK(log.records[1].collided);
  CHECK(compute_goodput(log) == 0.0);
}

TEST_CASE("a fragmented packet loses only the overlapped fragment") {
  // Node 0: [126, 126] B at t = 0, each 0.210176 s on air.
  // Node 1: one 251 B packet at t = 0.3 s, 0.394496 s on air.
  const Scenario s = base(2, 1, kFree);
  const int frags[] = {2, 1};
  const auto log = run_replication(s, 0, streams({{0.0}, {0.3}}), frags);
  REQUIRE(log.records.size() == 3);
  const auto& a0 = log.records[0];
  const auto& a1 = log.records[1];
  const auto& b = log.records[2];
  CHECK(a0.node_id == 0);
  CHECK(a0.end == Timestamp{210'176'000});
  CHECK(a1.start == Timestamp{210'176'000});
  CHECK(a1.end == Timestamp{420'352'000});
  CHECK(b.start == from_seconds(0.3));
  CHECK(b.end == from_seconds(0.3) + Duration{394'496'000});
  CHECK_FALSE(a0.collided);
  CHECK(a1.collided);
  CHECK(b.collided);
  CHECK_FALSE(log.packets[0][0].delivered());
  CHECK_FALSE(log.packets[1][0].delivered());
  CHECK(compute_goodput(log) == 0.0);
  // Only the clean 126 B fragment reaches the gateway.
  CHECK(compute_throughput(log) == doctest::Approx(126.0 * 8 / 3600.0));
}

TEST_CASE("duty cycle pause separates the fragments of a packet") {
  const Scenario s = base(1, 2, kOnePct);
  const auto log = run_replication(s, 0, streams({{0.0}}));
  REQUIRE(log.records.size() == 2);
  const auto toa = log.records[0].end - log.records[0].start;
  CHECK(toa == Duration{210'176'000});
  CHECK(log.records[1].start == log.records[0].end + 99 * toa);
  const auto delay = compute_mean_delay(log);
  REQUIRE(delay);
  CHECK(*delay == doctest::Approx(21.227776).epsilon(1e-12));
}

TEST_CASE("without a duty cycle fragments go back to back") {
  const auto log = run_replication(base(1, 5, kFree), 0, streams({{1.0}}));
  REQUIRE(log.records.size() == 5);
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    CHECK(log.records[i].start == log.records[i - 1].end);
  }
  CHECK(*compute_mean_delay(log) == doctest::Approx(0.51328));
}

TEST_CASE("the pause also applies between packets") {
  const Scenario s = base(1, 1, kOnePct);
  const auto log = run_replication(s, 0, streams({{0.0, 1.0}}));
  REQUIRE(log.records.size() == 2);
  const auto toa = log.records[0].end - log.records[0].start;
  CHECK(log.records[1].start == log.records[0].end + 99 * toa);
  // Second packet waited in the FIFO.
  CHECK(log.packets[0][1].completed - log.packets[0][1].generated ==
        log.records[1].end - Timestamp{1s});
}

TEST_CASE("an idle node past its pause transmits at once") {
  const Scenario s = base(1, 1, kOnePct);
  const auto log = run_replication(s, 0, streams({{0.0, 100.0}}));
  REQUIRE(log.records.size() == 2);
  CHECK(log.records[1].start == Timestamp{100s});
}

TEST_CASE("queued packets are sent in arrival order") {
  const Scenario s = base(1, 1, kFree);
  const auto log = run_replication(s, 0, streams({{0.0, 0.1, 0.2}}));
  REQUIRE(log.records.size() == 3);
  for (std::uint32_t i = 0; i < 3; ++i) {
    CHECK(log.records[i].packet_id == i);
  }
  CHECK(log.records[1].start == log.records[0].end);
}

TEST_CASE("drop policy discards arrivals while a packet is pending") {
  Scenario s = base(1, 1, kOnePct);
  s.queue_policy = QueuePolicy::drop;
  const auto log = run_replication(s, 0, streams({{0.0, 0.1, 100.0}}));
  REQUIRE(log.packets[0].size() == 3);
  CHECK_FALSE(log.packets[0][0].dropped);
  CHECK(log.packets[0][1].dropped);
  CHECK_FALSE(log.packets[0][2].dropped);
  CHECK(log.records.size() == 2);
  CHECK(compute_metrics(log).packets_dropped == 1);
}

TEST_CASE("packets cut off by the horizon are excluded") {
  Scenario s = base(1, 2, kOnePct);
  s.horizon = 10s;
  const auto log = run_replication(s, 0, streams({{0.0}}));
  // Second fragment would start at ~21 s, after the horizon.
  CHECK(log.records.size() == 1);
  CHECK_FALSE(log.packets[0][0].complete);
  CHECK(log.packets_completed == 0);
  CHECK(compute_goodput(log) == 100.0);
  CHECK_FALSE(compute_mean_delay(log).has_value());
}

TEST_CASE("arrival stream count must match the node count") {
  CHECK_THROWS_AS(run_replication(base(2, 1, kFree), 0, streams({{0.0}})),
                  std::invalid_argument);
  Scenario bad = base(1, 1, kFree);
  bad.n_fragments = 300;
  CHECK_THROWS_AS(run_replication(bad, 0), std::invalid_argument);
}

TEST_CASE("engine invariants over random scenarios") {
  for (int nodes : {2, 5, 20}) {
    for (int frags : {1, 3, 10}) {
      for (const auto& dc : {kFree, kOnePct, DutyCycleLimit::percent(10)}) {
        for (int sf : {7, 12}) {
          Scenario s = base(nodes, frags, dc, sf);
          s.horizon = 2000s;
          s.base_seed = 77;
          const auto log = run_replication(s, 1);

          // Records are start-ordered; collision marks match the oracle.
          const auto oracle = testing::brute_force_collisions(log.records);
          std::map<std::uint32_t, const TransmissionRecord*> last;
          std::map<std::pair<std::uint32_t, std::uint32_t>, int> per_packet;
          for (std::size_t i = 0; i < log.records.size(); ++i) {
            const auto& r = log.records[i];
            CHECK(r.end > r.start);
            CHECK(r.collided == oracle[i]);
            if (i > 0) {
              CHECK(log.records[i - 1].start <= r.start);
            }
            if (auto it = last.find(r.node_id); it != last.end()) {
              const auto& p = *it->second;
              const Duration toa = p.end - p.start;
              CHECK(r.start >= p.end + duty_cycle_off_time(toa, dc));
            }
            last[r.node_id] = &r;
            ++per_packet[{r.node_id, r.packet_id}];
          }

          // Delivery rule and fragment conservation.
          for (std::uint32_t n = 0; n < log.packets.size(); ++n) {
            for (std::uint32_t p = 0; p < log.packets[n].size(); ++p) {
              const auto& pkt = log.packets[n][p];
              if (pkt.complete) {
                CHECK(per_packet[{n, p}] == frags);
              }
            }
          }
          const auto rc = testing::recount(log);
          CHECK(rc.completed == log.packets_completed);
          const auto m = compute_metrics(log);
          CHECK(rc.delivered == m.packets_delivered);
        }
      }
    }
  }
}

TEST_CASE("replications are deterministic") {
  Scenario s = base(10, 5, kOnePct);
  s.base_seed = 5;
  const auto a = run_replication(s, 4);
  const auto b = run_replication(s, 4);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].start == b.records[i].start);
    CHECK(a.records[i].end == b.records[i].end);
    CHECK(a.records[i].node_id == b.records[i].node_id);
    CHECK(a.records[i].collided == b.records[i].collided);
  }
  CHECK(run_replication(s, 5).records.size() != 0);
}
