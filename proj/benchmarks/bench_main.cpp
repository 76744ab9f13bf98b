#include <algorithm>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fragsim/metrics.hpp"
#include "fragsim/phy_toa.hpp"
#include "fragsim/sim_engine.hpp"

using namespace fragsim;

static void BM_TimeOnAir(benchmark::State& state) {
  const RadioConfig cfg = RadioConfig::with_defaults(static_cast<int>(state.range(0)));
  int bytes = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(time_on_air(cfg, bytes));
    bytes = bytes % 255 + 1;
  }
}
BENCHMARK(BM_TimeOnAir)->Arg(7)->Arg(12);

static std::vector<TransmissionRecord> random_intervals(std::size_t n) {
  std::mt19937_64 rng{7};
  std::uniform_int_distribution<std::int64_t> start(0, static_cast<std::int64_t>(n) * 1000);
  std::uniform_int_distribution<std::int64_t> len(1, 2000);
  std::vector<TransmissionRecord> out(n);
  for (auto& r : out) {
    r.start = Timestamp{start(rng)};
    r.end = r.start + Duration{len(rng)};
  }
  return out;
}

static void BM_DetectCollisionsSorted(benchmark::State& state) {
  auto records = random_intervals(static_cast<std::size_t>(state.range(0)));
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  for (auto _ : state) {
    detect_collisions(records);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectCollisionsSorted)->Range(1 << 8, 1 << 18);

static void BM_DetectCollisionsUnsorted(benchmark::State& state) {
  const auto records = random_intervals(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    auto copy = records;
    state.ResumeTiming();
    detect_collisions(copy);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectCollisionsUnsorted)->Range(1 << 8, 1 << 18);

// One replication of the 20-node SF7 grid cell; args are fragment count and
// duty cycle (0 = unrestricted, else percent).
static void BM_Replication(benchmark::State& state) {
  Scenario s;
  s.n_nodes = 20;
  s.n_fragments = static_cast<int>(state.range(0));
  s.duty_cycle = state.range(1) == 0
                     ? DutyCycleLimit::unrestricted()
                     : DutyCycleLimit::percent(static_cast<double>(state.range(1)));
  std::uint64_t rep = 0;
  std::size_t records = 0;
  for (auto _ : state) {
    const ReplicationLog log = run_replication(s, rep++);
    benchmark::DoNotOptimize(compute_metrics(log));
    records += log.records.size();
  }
  state.counters["records/rep"] =
      static_cast<double>(records) / static_cast<double>(state.iterations());
}
BENCHMARK(BM_Replication)
    ->Args({1, 0})
    ->Args({50, 0})
    ->Args({1, 1})
    ->Args({50, 1})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
