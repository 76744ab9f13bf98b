#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "fragsim/sim_engine.hpp"
#include "fragsim/sweep.hpp"

namespace fragsim {

/// Column order of the result CSV.
inline constexpr const char* kResultColumns[] = {
    "n_nodes",
    "sf",
    "bw_hz",
    "duty_cycle_pct",
    "n_fragments",
    "reps",
    "goodput_pct_mean",
    "goodput_pct_std",
    "throughput_bps_mean",
    "throughput_bps_std",
    "energy_airtime_s_mean",
    "energy_airtime_s_std",
    "delay_s_mean",
    "delay_s_std",
    "throughput_gain_pct",
    "goodput_change_pp",
    "energy_overhead_pct",
    "delay_overhead_pct",
};

/// CSV text: header plus one row per table row, '\n' terminated, floats
/// with 9 significant digits, missing values as empty fields. An unrestricted
/// duty cycle is written as 100.
std::string format_csv(const ResultTable& table);

/// Writes format_csv(table) to path. Throws std::runtime_error naming the
/// path on I/O failure, std::invalid_argument on an empty table.
void emit_csv(const ResultTable& table, const std::filesystem::path& path);

/// Per (nodes, SF, duty cycle) group: the fragment count with the best mean
/// goodput, and the recommended one, i.e. the smallest fragment count within
/// one percentage point of that best, with its energy and delay overheads.
/// Rows in which no packet ever completed are left out.
std::string emit_summary(const ResultTable& table);

/// One CSV row per record: replication, node_id, packet_id, fragment_index,
/// start_ns, end_ns, collided.
void write_log_csv(std::ostream& out, const ReplicationLog& log,
                   bool with_header);

}  // namespace fragsim
