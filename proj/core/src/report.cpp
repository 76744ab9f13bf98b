#include "fragsim/report.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

namespace fragsim {

namespace {

void put_double(std::string& out, std::optional<double> v) {
  if (v) {
    fmt::format_to(std::back_inserter(out), "{:.9g}", *v);
  }
}

std::string pct(std::optional<double> v) {
  return v ? fmt::format("{:+.1f}%", *v) : std::string{"n/a"};
}

}  // namespace

std::string format_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < std::size(kResultColumns); ++i) {
    out += i ? "," : "";
    out += kResultColumns[i];
  }
  out += '\n';
  for (const ResultRow& row : table.rows) {
    const AggregateReport& r = row.report;
    fmt::format_to(std::back_inserter(out), "{},{},{},", row.point.n_nodes,
                   row.point.spreading_factor, row.bandwidth_hz);
    put_double(out, row.point.duty_cycle.percent_or_full());
    fmt::format_to(std::back_inserter(out), ",{},{}", row.point.n_fragments,
                   r.n_replications);
    for (const MetricStat* s : {&r.goodput_percent, &r.throughput_bps,
                                &r.energy_airtime_s, &r.mean_delay_s}) {
      out += ',';
      put_double(out, s->mean);
      out += ',';
      put_double(out, s->stddev);
    }
    for (const std::optional<double>& c :
         {row.changes.throughput_gain_pct, row.changes.goodput_change_pp,
          row.changes.energy_overhead_pct, row.changes.delay_overhead_pct}) {
      out += ',';
      put_double(out, c);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) {
    throw std::invalid_argument("refusing to write an empty result table");
  }
  const std::string text = format_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error(
        fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) {
    throw std::runtime_error(
        fmt::format("failed writing '{}'", path.string()));
  }
}

std::string emit_summary(const ResultTable& table) {
  using Key = std::tuple<int, int, double, std::int64_t>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const ResultRow& row : table.rows) {
    const Key key{row.point.n_nodes, row.point.spreading_factor,
                  row.point.duty_cycle.is_unrestricted()
                      ? -1.0
                      : row.point.duty_cycle.percent_or_full(),
                  row.bandwidth_hz};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) {
      order.push_back(key);
    }
    it->second.push_back(&row);
  }

  std::string out;
  for (const Key& key : order) {
    const auto& rows = groups[key];
    const ResultRow& head = *rows.front();
    const std::string label = fmt::format(
        "nodes={} SF{} bw={}Hz duty_cycle={}", head.point.n_nodes,
        head.point.spreading_factor, head.bandwidth_hz,
        describe(head.point.duty_cycle));

    std::vector<const ResultRow*> usable;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(usable),
                 [](const ResultRow* r) {
                   return r->report.packets_completed.mean.value_or(0.0) > 0.0 &&
                          r->report.goodput_percent.mean.has_value();
                 });
    if (usable.empty()) {
      fmt::format_to(std::back_inserter(out),
                     "{}: omitted, no packet completed within the horizon\n",
                     label);
      continue;
    }

    const auto goodput = [](const ResultRow* r) {
      return *r->report.goodput_percent.mean;
    };
    const ResultRow* best = *std::max_element(
        usable.begin(), usable.end(), [&](const ResultRow* a, const ResultRow* b) {
          return goodput(a) < goodput(b) ||
                 (goodput(a) == goodput(b) &&
                  a->point.n_fragments > b->point.n_fragments);
        });
    const ResultRow* pick = best;
    for (const ResultRow* r : usable) {
      if (goodput(r) >= goodput(best) - 1.0 &&
          r->point.n_fragments < pick->point.n_fragments) {
        pick = r;
      }
    }
    fmt::format_to(
        std::back_inserter(out),
        "{}: best goodput {:.2f}% at {} fragment(s); recommended {} "
        "fragment(s) (goodput {:.2f}%, energy overhead {}, delay overhead {})\n",
        label, goodput(best), best->point.n_fragments, pick->point.n_fragments,
        goodput(pick), pct(pick->changes.energy_overhead_pct),
        pct(pick->changes.delay_overhead_pct));
  }
  return out;
}

void write_log_csv(std::ostream& out, const ReplicationLog& log,
                   bool with_header) {
  if (with_header) {
    out << "replication,node_id,packet_id,fragment_index,start_ns,end_ns,"
           "collided\n";
  }
  std::string line;
  for (const TransmissionRecord& r : log.records) {
    line.clear();
    fmt::format_to(std::back_inserter(line), "{},{},{},{},{},{},{}\n",
                   log.replication_index, r.node_id, r.packet_id,
                   r.fragment_index, r.start.count(), r.end.count(),
                   r.collided ? 1 : 0);
    out << line;
  }
}

}  // namespace fragsim
