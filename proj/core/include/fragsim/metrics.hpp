#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "fragsim/sim_engine.hpp"

namespace fragsim {

/// Metrics of one replication.
///
/// Only packets whose last fragment ended by the horizon count towards
/// goodput and delay. Energy is transmit airtime: the radio's transmit power
/// is a common factor that cancels in every overhead ratio.
struct MetricsReport {
  double goodput_percent = 100.0;
  double throughput_bps = 0.0;
  double energy_airtime_s = 0.0;
  /// Airtime spent per completed application packet. Missing when no
  /// packet completed.
  std::optional<double> energy_per_packet_s;
  /// Missing when nothing was delivered.
  std::optional<double> mean_delay_s;

  std::uint64_t packets_generated = 0;
  std::uint64_t packets_completed = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t packets_dropped = 0;
  std::uint64_t fragments_sent = 0;
  std::uint64_t fragments_uncollided = 0;
};

/// 100 * delivered / completed; 100 when no packet completed.
double compute_goodput(const ReplicationLog& log);
/// Bits of uncollided fragments (header included) that ended by the horizon,
/// divided by the horizon.
double compute_throughput(const ReplicationLog& log);
/// Sum of end - start over every record, collided or not.
double compute_energy_airtime(const ReplicationLog& log);
std::optional<double> compute_energy_per_packet(const ReplicationLog& log);
/// Mean of completion - generation over delivered packets. Includes queueing
/// and inter-fragment off times.
std::optional<double> compute_mean_delay(const ReplicationLog& log);

MetricsReport compute_metrics(const ReplicationLog& log);

struct MetricStat {
  /// Missing when no replication produced a value.
  std::optional<double> mean;
  /// Sample standard deviation; 0 for a single value.
  std::optional<double> stddev;
  std::size_t count = 0;
};

struct AggregateReport {
  std::size_t n_replications = 0;
  MetricStat goodput_percent;
  MetricStat throughput_bps;
  MetricStat energy_airtime_s;
  MetricStat energy_per_packet_s;
  MetricStat mean_delay_s;
  MetricStat packets_completed;
};

/// Mean and sample standard deviation per metric, summed in input order.
/// Missing values are skipped per metric. Throws on empty input.
AggregateReport aggregate(std::span<const MetricsReport> reports);

enum class Metric {
  goodput,
  throughput,
  energy,
  delay,
};

/// Percent change of the fragmented mean over the baseline mean. Energy uses
/// airtime per completed packet so that it does not depend on how many
/// packets the duty cycle let through. Missing when either value is missing
/// or the baseline is 0.
std::optional<double> relative_change(const AggregateReport& fragmented,
                                      const AggregateReport& baseline,
                                      Metric metric);

/// Difference of goodput means in percentage points.
std::optional<double> goodput_change_points(const AggregateReport& fragmented,
                                            const AggregateReport& baseline);

struct RelativeChanges {
  std::optional<double> throughput_gain_pct;
  std::optional<double> goodput_change_pct;
  std::optional<double> goodput_change_pp;
  std::optional<double> energy_overhead_pct;
  std::optional<double> delay_overhead_pct;

  static RelativeChanges zero();
  static RelativeChanges between(const AggregateReport& fragmented,
                                 const AggregateReport& baseline);
};

std::string_view metric_name(Metric metric);

}  // namespace fragsim
