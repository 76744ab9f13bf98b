#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fragsim/metrics.hpp"
#include "fragsim/sim_engine.hpp"

namespace fragsim {

/// One cell of a sweep grid.
struct GridPoint {
  int n_nodes = 1;
  int spreading_factor = 7;
  DutyCycleLimit duty_cycle = DutyCycleLimit::unrestricted();
  int n_fragments = 1;
};

/// Grid of scenarios sharing everything but the swept axes.
struct SweepSpec {
  Scenario base;
  /// Empty means LDRO follows the spreading factor (see
  /// RadioConfig::with_defaults).
  std::optional<bool> ldro_override;
  std::vector<int> node_counts;
  std::vector<int> fragment_counts;
  std::vector<int> spreading_factors;
  std::vector<DutyCycleLimit> duty_cycles;
  std::string output_path;
  int jobs = 1;

  /// Throws ConfigError for an empty axis, a missing fragment count of 1
  /// or any grid point that is not a valid Scenario.
  void validate() const;

  /// Grid points in row order: nodes, then SF, then duty cycle, then
  /// fragment count, each in the order listed.
  std::vector<GridPoint> grid() const;

  /// The scenario simulated at a grid point. Its seed is derived from the
  /// base seed and every coordinate except the fragment count, so all
  /// fragment counts of a group replay the same arrival patterns.
  Scenario scenario_at(const GridPoint& point) const;
};

/// One-cell sweep running the scenario next to its unfragmented baseline.
SweepSpec sweep_for_scenario(const Scenario& scenario);

std::uint64_t group_seed(std::uint64_t base_seed, const GridPoint& point,
                         std::int64_t bandwidth_hz);

std::string describe(const DutyCycleLimit& dc);

struct ResultRow {
  GridPoint point;
  std::int64_t bandwidth_hz = 125000;
  AggregateReport report;
  /// Against the fragment count 1 row of the same group; all zero on that
  /// row.
  RelativeChanges changes;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

/// Receives every replication log as it finishes. May be called from
/// several threads at once.
using ReplicationObserver =
    std::function<void(const GridPoint&, const ReplicationLog&)>;

struct SweepOptions {
  /// Worker threads; 0 takes SweepSpec::jobs.
  int jobs = 0;
  ReplicationObserver observer;
};

/// Runs every grid point for base.n_replications replications. The table
/// does not depend on the number of workers.
ResultTable run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

}  // namespace fragsim
