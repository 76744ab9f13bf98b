#include "fragsim/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fragsim {

double compute_goodput(const ReplicationLog& log) {
  std::uint64_t completed = 0;
  std::uint64_t delivered = 0;
  for (const auto& node : log.packets) {
    for (const PacketOutcome& p : node) {
      completed += p.complete ? 1 : 0;
      delivered += p.delivered() ? 1 : 0;
    }
  }
  if (completed == 0) {
    return 100.0;
  }
  return 100.0 * static_cast<double>(delivered) / static_cast<double>(completed);
}

double compute_throughput(const ReplicationLog& log) {
  std::uint64_t bits = 0;
  for (const TransmissionRecord& r : log.records) {
    if (!r.collided && r.end <= log.scenario.horizon) {
      bits += 8u * r.on_air_bytes;
    }
  }
  return static_cast<double>(bits) / to_seconds(log.scenario.horizon);
}

double compute_energy_airtime(const ReplicationLog& log) {
  Duration total{0};
  for (const TransmissionRecord& r : log.records) {
    total += r.end - r.start;
  }
  return to_seconds(total);
}

std::optional<double> compute_energy_per_packet(const ReplicationLog& log) {
  Duration total{0};
  std::uint64_t completed = 0;
  for (const TransmissionRecord& r : log.records) {
    if (log.packets[r.node_id][r.packet_id].complete) {
      total += r.end - r.start;
    }
  }
  for (const auto& node : log.packets) {
    for (const PacketOutcome& p : node) {
      completed += p.complete ? 1 : 0;
    }
  }
  if (completed == 0) {
    return std::nullopt;
  }
  return to_seconds(total) / static_cast<double>(completed);
}

std::optional<double> compute_mean_delay(const ReplicationLog& log) {
  Duration total{0};
  std::uint64_t delivered = 0;
  for (const auto& node : log.packets) {
    for (const PacketOutcome& p : node) {
      if (p.delivered()) {
        total += p.completed - p.generated;
        ++delivered;
      }
    }
  }
  if (delivered == 0) {
    return std::nullopt;
  }
  return to_seconds(total) / static_cast<double>(delivered);
}

MetricsReport compute_metrics(const ReplicationLog& log) {
  MetricsReport m;
  m.goodput_percent = compute_goodput(log);
  m.throughput_bps = compute_throughput(log);
  m.energy_airtime_s = compute_energy_airtime(log);
  m.energy_per_packet_s = compute_energy_per_packet(log);
  m.mean_delay_s = compute_mean_delay(log);

  m.packets_generated = log.packets_generated;
  for (const auto& node : log.packets) {
    for (const PacketOutcome& p : node) {
      m.packets_completed += p.complete ? 1 : 0;
      m.packets_delivered += p.delivered() ? 1 : 0;
      m.packets_dropped += p.dropped ? 1 : 0;
    }
  }
  m.fragments_sent = log.records.size();
  for (const TransmissionRecord& r : log.records) {
    m.fragments_uncollided += r.collided ? 0 : 1;
  }
  return m;
}

namespace {

template <typename Get>
MetricStat summarize(std::span<const MetricsReport> reports, Get get) {
  std::vector<double> values;
  values.reserve(reports.size());
  for (const MetricsReport& r : reports) {
    if (const std::optional<double> v = get(r)) {
      values.push_back(*v);
    }
  }
  MetricStat s;
  s.count = values.size();
  if (values.empty()) {
    return s;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) {
    sq += (v - mean) * (v - mean);
  }
  s.mean = mean;
  s.stddev = values.size() > 1
                 ? std::sqrt(sq / static_cast<double>(values.size() - 1))
                 : 0.0;
  return s;
}

std::optional<double> percent_change(const std::optional<double>& value,
                                     const std::optional<double>& base) {
  if (!value || !base || *base == 0.0) {
    return std::nullopt;
  }
  return 100.0 * (*value - *base) / *base;
}

}  // namespace

AggregateReport aggregate(std::span<const MetricsReport> reports) {
  if (reports.empty()) {
    throw std::invalid_argument("aggregate needs at least one report");
  }
  AggregateReport a;
  a.n_replications = reports.size();
  a.goodput_percent = summarize(reports, [](const MetricsReport& r) {
    return std::optional<double>{r.goodput_percent};
  });
  a.throughput_bps = summarize(reports, [](const MetricsReport& r) {
    return std::optional<double>{r.throughput_bps};
  });
  a.energy_airtime_s = summarize(reports, [](const MetricsReport& r) {
    return std::optional<double>{r.energy_airtime_s};
  });
  a.energy_per_packet_s = summarize(
      reports, [](const MetricsReport& r) { return r.energy_per_packet_s; });
  a.mean_delay_s =
      summarize(reports, [](const MetricsReport& r) { return r.mean_delay_s; });
  a.packets_completed = summarize(reports, [](const MetricsReport& r) {
    return std::optional<double>{static_cast<double>(r.packets_completed)};
  });
  return a;
}

std::optional<double> relative_change(const AggregateReport& fragmented,
                                      const AggregateReport& baseline,
                                      Metric metric) {
  switch (metric) {
    case Metric::goodput:
      return percent_change(fragmented.goodput_percent.mean,
                            baseline.goodput_percent.mean);
    case Metric::throughput:
      return percent_change(fragmented.throughput_bps.mean,
                            baseline.throughput_bps.mean);
    case Metric::energy:
      return percent_change(fragmented.energy_per_packet_s.mean,
                            baseline.energy_per_packet_s.mean);
    case Metric::delay:
      return percent_change(fragmented.mean_delay_s.mean,
                            baseline.mean_delay_s.mean);
  }
  return std::nullopt;
}

std::optional<double> goodput_change_points(const AggregateReport& fragmented,
                                            const AggregateReport& baseline) {
  if (!fragmented.goodput_percent.mean || !baseline.goodput_percent.mean) {
    return std::nullopt;
  }
  return *fragmented.goodput_percent.mean - *baseline.goodput_percent.mean;
}

RelativeChanges RelativeChanges::zero() {
  return {0.0, 0.0, 0.0, 0.0, 0.0};
}

RelativeChanges RelativeChanges::between(const AggregateReport& fragmented,
                                         const AggregateReport& baseline) {
  RelativeChanges c;
  c.throughput_gain_pct =
      relative_change(fragmented, baseline, Metric::throughput);
  c.goodput_change_pct = relative_change(fragmented, baseline, Metric::goodput);
  c.goodput_change_pp = goodput_change_points(fragmented, baseline);
  c.energy_overhead_pct = relative_change(fragmented, baseline, Metric::energy);
  c.delay_overhead_pct = relative_change(fragmented, baseline, Metric::delay);
  return c;
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::goodput:
      return "goodput";
    case Metric::throughput:
      return "throughput";
    case Metric::energy:
      return "energy";
    case Metric::delay:
      return "delay";
  }
  return "unknown";
}

}  // namespace fragsim
