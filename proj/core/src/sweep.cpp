#include "fragsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "fragsim/errors.hpp"
#include "fragsim/rng.hpp"

namespace fragsim {

std::string describe(const DutyCycleLimit& dc) {
  if (dc.is_unrestricted()) {
    return "unrestricted";
  }
  return fmt::format("{:g}%", *dc.percent_value());
}

std::uint64_t group_seed(std::uint64_t base_seed, const GridPoint& point,
                         std::int64_t bandwidth_hz) {
  // Parts per million keeps fractional duty cycles distinct; 0 is reserved
  // for unrestricted.
  const std::uint64_t dc_code =
      point.duty_cycle.is_unrestricted()
          ? 0
          : static_cast<std::uint64_t>(
                std::llround(*point.duty_cycle.percent_value() * 1e6));
  return hash_combine({base_seed, static_cast<std::uint64_t>(point.n_nodes),
                       static_cast<std::uint64_t>(point.spreading_factor),
                       static_cast<std::uint64_t>(bandwidth_hz), dc_code});
}

Scenario SweepSpec::scenario_at(const GridPoint& point) const {
  Scenario s = base;
  s.n_nodes = point.n_nodes;
  s.n_fragments = point.n_fragments;
  s.duty_cycle = point.duty_cycle;
  s.radio.spreading_factor = point.spreading_factor;
  if (ldro_override) {
    s.radio.low_data_rate_optimize = *ldro_override;
  } else if (point.spreading_factor >= 7 && point.spreading_factor <= 12 &&
             s.radio.bandwidth_hz > 0) {
    s.radio.low_data_rate_optimize =
        low_data_rate_required(point.spreading_factor, s.radio.bandwidth_hz);
  }
  s.base_seed = group_seed(base.base_seed, point, s.radio.bandwidth_hz);
  return s;
}

std::vector<GridPoint> SweepSpec::grid() const {
  std::vector<GridPoint> points;
  points.reserve(node_counts.size() * spreading_factors.size() *
                 duty_cycles.size() * fragment_counts.size());
  for (int n : node_counts) {
    for (int sf : spreading_factors) {
      for (const DutyCycleLimit& dc : duty_cycles) {
        for (int f : fragment_counts) {
          points.push_back(GridPoint{n, sf, dc, f});
        }
      }
    }
  }
  return points;
}

void SweepSpec::validate() const {
  const auto require_nonempty = [](const auto& axis, const char* key) {
    if (axis.empty()) {
      throw ConfigError(key, "list must not be empty");
    }
  };
  require_nonempty(node_counts, "node_counts");
  require_nonempty(fragment_counts, "fragment_counts");
  require_nonempty(spreading_factors, "spreading_factors");
  require_nonempty(duty_cycles, "duty_cycles");
  if (std::find(fragment_counts.begin(), fragment_counts.end(), 1) ==
      fragment_counts.end()) {
    throw ConfigError("fragment_counts",
                      "must include 1, the unfragmented baseline");
  }
  if (jobs < 1) {
    throw ConfigError("jobs", "must be at least 1");
  }

  const auto check = [&](const GridPoint& p, const char* key) {
    try {
      scenario_at(p).validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  };
  const GridPoint first{node_counts.front(), spreading_factors.front(),
                        duty_cycles.front(), fragment_counts.front()};
  for (int n : node_counts) {
    check({n, first.spreading_factor, first.duty_cycle, first.n_fragments},
          "node_counts");
  }
  for (int sf : spreading_factors) {
    check({first.n_nodes, sf, first.duty_cycle, first.n_fragments},
          "spreading_factors");
  }
  for (int f : fragment_counts) {
    check({first.n_nodes, first.spreading_factor, first.duty_cycle, f},
          "fragment_counts");
  }
}

SweepSpec sweep_for_scenario(const Scenario& scenario) {
  SweepSpec spec;
  spec.base = scenario;
  spec.base.n_fragments = 1;
  spec.ldro_override = scenario.radio.low_data_rate_optimize;
  spec.node_counts = {scenario.n_nodes};
  spec.spreading_factors = {scenario.radio.spreading_factor};
  spec.duty_cycles = {scenario.duty_cycle};
  spec.fragment_counts = {1};
  if (scenario.n_fragments != 1) {
    spec.fragment_counts.push_back(scenario.n_fragments);
  }
  return spec;
}

namespace {

bool same_group(const GridPoint& a, const GridPoint& b) {
  return a.n_nodes == b.n_nodes && a.spreading_factor == b.spreading_factor &&
         a.duty_cycle == b.duty_cycle;
}

}  // namespace

ResultTable run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  const std::vector<GridPoint> points = spec.grid();
  std::vector<Scenario> scenarios;
  scenarios.reserve(points.size());
  for (const GridPoint& p : points) {
    scenarios.push_back(spec.scenario_at(p));
  }

  const auto reps = static_cast<std::size_t>(spec.base.n_replications);
  const std::size_t total = points.size() * reps;
  std::vector<MetricsReport> results(total);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total || failed.load()) {
        return;
      }
      const std::size_t point = task / reps;
      const std::size_t rep = task % reps;
      try {
        const ReplicationLog log = run_replication(scenarios[point], rep);
        if (options.observer) {
          options.observer(points[point], log);
        }
        results[task] = compute_metrics(log);
      } catch (...) {
        std::lock_guard lock{error_mutex};
        if (!error) {
          error = std::current_exception();
        }
        failed = true;
        return;
      }
    }
  };

  const int jobs = std::max(1, options.jobs > 0 ? options.jobs : spec.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }

  ResultTable table;
  table.rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::span<const MetricsReport> slice{results.data() + i * reps, reps};
    table.rows.push_back(ResultRow{points[i],
                                   scenarios[i].radio.bandwidth_hz,
                                   aggregate(slice),
                                   {}});
  }
  for (ResultRow& row : table.rows) {
    if (row.point.n_fragments == 1) {
      row.changes = RelativeChanges::zero();
      continue;
    }
    const auto base = std::find_if(
        table.rows.begin(), table.rows.end(), [&](const ResultRow& r) {
          return r.point.n_fragments == 1 && same_group(r.point, row.point);
        });
    row.changes = RelativeChanges::between(row.report, base->report);
  }
  return table;
}

}  // namespace fragsim
