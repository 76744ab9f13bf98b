#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fragsim/errors.hpp"
#include "fragsim/report.hpp"
#include "fragsim/sweep.hpp"

using namespace fragsim;
using namespace std::chrono_literals;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.base.n_replications = 5;
  spec.base.horizon = 600s;
  spec.base.base_seed = 77;
  spec.node_counts = {20};
  spec.spreading_factors = {7};
  spec.duty_cycles = {DutyCycleLimit::unrestricted()};
  spec.fragment_counts = {1, 2};
  return spec;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

ResultRow row(int nodes, int frags, double goodput, double completed) {
  ResultRow r;
  r.point.n_nodes = nodes;
  r.point.n_fragments = frags;
  r.report.n_replications = 1;
  r.report.goodput_percent.mean = goodput;
  r.report.packets_completed.mean = completed;
  r.changes.energy_overhead_pct = 10.0 * (frags - 1);
  r.changes.delay_overhead_pct = 5.0 * (frags - 1);
  return r;
}

}  // namespace

TEST_CASE("two-row sweep") {
  const ResultTable t = run_sweep(small_spec());
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].point.n_fragments == 1);
  CHECK(t.rows[1].point.n_fragments == 2);
  CHECK(t.rows[0].report.n_replications == 5);

  const RelativeChanges& base = t.rows[0].changes;
  for (const auto& c : {base.throughput_gain_pct, base.goodput_change_pct,
                        base.goodput_change_pp, base.energy_overhead_pct,
                        base.delay_overhead_pct}) {
    REQUIRE(c.has_value());
    CHECK(*c == 0.0);
  }
  // Energy is per completed packet, so the overhead is the plan ratio.
  CHECK(*t.rows[1].changes.energy_overhead_pct ==
        doctest::Approx(100.0 * (0.420352 - 0.394496) / 0.394496));
  CHECK(t.rows[1].changes.throughput_gain_pct.has_value());
}

TEST_CASE("sweep is deterministic and independent of the worker count") {
  SweepSpec spec = small_spec();
  spec.node_counts = {3, 8};
  spec.duty_cycles = {DutyCycleLimit::unrestricted(), DutyCycleLimit::percent(1.0)};
  spec.fragment_counts = {1, 3, 10};
  const std::string one = format_csv(run_sweep(spec, {.jobs = 1}));
  CHECK(one == format_csv(run_sweep(spec, {.jobs = 1})));
  CHECK(one == format_csv(run_sweep(spec, {.jobs = 3})));
  CHECK(count_lines(one) == 1 + 2 * 2 * 3);
}

TEST_CASE("fragment counts of a group share arrival patterns") {
  SweepSpec spec = small_spec();
  spec.fragment_counts = {1, 4};
  const auto grid = spec.grid();
  CHECK(spec.scenario_at(grid[0]).base_seed == spec.scenario_at(grid[1]).base_seed);
  SweepSpec other = spec;
  other.node_counts = {21};
  CHECK(other.scenario_at(other.grid()[0]).base_seed !=
        spec.scenario_at(grid[0]).base_seed);
}

TEST_CASE("scenario at a grid point") {
  SweepSpec spec = small_spec();
  spec.spreading_factors = {7, 12};
  const Scenario s12 = spec.scenario_at({5, 12, DutyCycleLimit::percent(1.0), 10});
  CHECK(s12.n_nodes == 5);
  CHECK(s12.radio.spreading_factor == 12);
  CHECK(s12.radio.low_data_rate_optimize);
  CHECK(s12.n_fragments == 10);
  CHECK(s12.duty_cycle == DutyCycleLimit::percent(1.0));
  CHECK_FALSE(spec.scenario_at({5, 7, DutyCycleLimit::percent(1.0), 10})
                  .radio.low_data_rate_optimize);
  spec.ldro_override = true;
  CHECK(spec.scenario_at({5, 7, DutyCycleLimit::percent(1.0), 10})
            .radio.low_data_rate_optimize);
}

TEST_CASE("grid order") {
  SweepSpec spec = small_spec();
  spec.node_counts = {5, 10};
  spec.spreading_factors = {7, 12};
  spec.fragment_counts = {1, 2};
  const auto g = spec.grid();
  REQUIRE(g.size() == 8);
  CHECK(g[0].n_nodes == 5);
  CHECK(g[1].n_fragments == 2);
  CHECK(g[2].spreading_factor == 12);
  CHECK(g[4].n_nodes == 10);
}

TEST_CASE("observer sees every replication") {
  SweepSpec spec = small_spec();
  std::mutex m;
  std::set<std::pair<int, std::uint64_t>> seen;
  SweepOptions options;
  options.jobs = 2;
  options.observer = [&](const GridPoint& p, const ReplicationLog& log) {
    std::lock_guard lock{m};
    seen.emplace(p.n_fragments, log.replication_index);
  };
  run_sweep(spec, options);
  CHECK(seen.size() == 10);
}

TEST_CASE("sweep for a single scenario") {
  Scenario s;
  s.n_nodes = 4;
  s.n_fragments = 6;
  const SweepSpec spec = sweep_for_scenario(s);
  CHECK(spec.fragment_counts == std::vector<int>{1, 6});
  CHECK(spec.grid().size() == 2);
  s.n_fragments = 1;
  CHECK(sweep_for_scenario(s).fragment_counts == std::vector<int>{1});
}

TEST_CASE("invalid sweeps") {
  SweepSpec spec = small_spec();
  spec.fragment_counts = {2};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = small_spec();
  spec.node_counts.clear();
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
}

TEST_CASE("csv") {
  const ResultTable t = run_sweep(small_spec());
  const std::string text = format_csv(t);
  CHECK(text.rfind(
            "n_nodes,sf,bw_hz,duty_cycle_pct,n_fragments,reps,goodput_pct_mean,"
            "goodput_pct_std,throughput_bps_mean,throughput_bps_std,"
            "energy_airtime_s_mean,energy_airtime_s_std,delay_s_mean,delay_s_std,"
            "throughput_gain_pct,goodput_change_pp,energy_overhead_pct,"
            "delay_overhead_pct\n",
            0) == 0);
  CHECK(text.find("\n20,7,125000,100,1,5,") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);

  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "fragsim_test_a.csv";
  const auto b = dir / "fragsim_test_b.csv";
  emit_csv(t, a);
  emit_csv(t, b);
  const std::string first = read_file(a);
  CHECK(count_lines(first) == 3);
  CHECK(first == read_file(b));
  CHECK(first == text);
  std::filesystem::remove(a);
  std::filesystem::remove(b);

  CHECK_THROWS_AS(emit_csv(ResultTable{}, a), std::invalid_argument);
  try {
    emit_csv(t, dir / "no_such_dir" / "x.csv");
    FAIL("wrote into a missing directory");
  } catch (const std::runtime_error& e) {
    CHECK(std::string{e.what()}.find("no_such_dir") != std::string::npos);
  }
}

TEST_CASE("missing delay is an empty field") {
  ResultTable t;
  ResultRow r = row(2, 1, 0.0, 3.0);
  r.report.throughput_bps.mean = 0.0;
  r.report.throughput_bps.stddev = 0.0;
  t.rows.push_back(r);
  const std::string text = format_csv(t);
  const std::string line = text.substr(text.find('\n') + 1);
  CHECK(line == "2,7,125000,100,1,1,0,,0,0,,,,,,,0,0\n");
}

TEST_CASE("float formatting") {
  ResultTable t;
  ResultRow r = row(1, 1, 100.0 / 3.0, 1.0);
  t.rows.push_back(r);
  CHECK(format_csv(t).find(",33.3333333,") != std::string::npos);
}

TEST_CASE("summary") {
  SUBCASE("single row") {
    ResultTable t;
    t.rows.push_back(row(5, 1, 80.0, 10.0));
    const std::string s = emit_summary(t);
    CHECK(s.find("nodes=5") != std::string::npos);
    CHECK(s.find("best goodput 80.00% at 1 fragment(s)") != std::string::npos);
    CHECK(s.find("recommended 1 fragment(s)") != std::string::npos);
  }
  SUBCASE("plateau picks the smallest count within one point") {
    ResultTable t;
    t.rows.push_back(row(5, 1, 20.0, 10.0));
    t.rows.push_back(row(5, 10, 59.5, 10.0));
    t.rows.push_back(row(5, 30, 60.2, 10.0));
    t.rows.push_back(row(5, 50, 59.9, 10.0));
    const std::string s = emit_summary(t);
    CHECK(s.find("best goodput 60.20% at 30 fragment(s)") != std::string::npos);
    CHECK(s.find("recommended 10 fragment(s) (goodput 59.50%, energy overhead "
                 "+90.0%, delay overhead +45.0%)") != std::string::npos);
  }
  SUBCASE("group without completed packets is omitted") {
    ResultTable t;
    t.rows.push_back(row(5, 1, 100.0, 0.0));
    t.rows.push_back(row(10, 1, 50.0, 4.0));
    const std::string s = emit_summary(t);
    CHECK(s.find("nodes=5 SF7 bw=125000Hz duty_cycle=unrestricted: omitted") !=
          std::string::npos);
    CHECK(s.find("nodes=10") != std::string::npos);
    CHECK(count_lines(s) == 2);
  }
}

TEST_CASE("log dump") {
  ReplicationLog log;
  log.replication_index = 3;
  TransmissionRecord r;
  r.node_id = 1;
  r.packet_id = 2;
  r.fragment_index = 0;
  r.start = Timestamp{10};
  r.end = Timestamp{25};
  r.collided = true;
  log.records.push_back(r);
  std::ostringstream out;
  write_log_csv(out, log, true);
  CHECK(out.str() ==
        "replication,node_id,packet_id,fragment_index,start_ns,end_ns,collided\n"
        "3,1,2,0,10,25,1\n");
}
