// fragsim: command-line front end for the fragmentation simulator.
//
//   fragsim run      --config scenario.cfg [--out rows.csv] [--dump-log log.csv]
//   fragsim sweep    --config grid.cfg [--out table.csv]
//   fragsim toa      --sf 12 --bytes 251
//   fragsim validate --config any.cfg
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "fragsim/config.hpp"
#include "fragsim/fragmenter.hpp"
#include "fragsim/phy_toa.hpp"
#include "fragsim/report.hpp"
#include "fragsim/sweep.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunFlags {
  std::string config;
  std::string out;
  std::string dump_log;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> jobs;
};

struct ToaFlags {
  int sf = 7;
  std::int64_t bw = 125000;
  int cr = 1;
  int preamble = 8;
  int bytes = 251;
  bool implicit_header = false;
  bool no_crc = false;
  std::string ldro = "auto";
  int fragments = 0;
  int payload = 250;
  int header = 1;
  double duty_cycle = 1.0;
};

void apply_overrides(fragsim::SweepSpec& spec, const RunFlags& flags) {
  if (flags.seed) {
    spec.base.base_seed = *flags.seed;
  }
  if (flags.reps) {
    spec.base.n_replications = *flags.reps;
  }
  if (flags.jobs) {
    spec.jobs = *flags.jobs;
  }
  spec.validate();
}

void write_table(const fragsim::ResultTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << fragsim::format_csv(table);
  } else {
    fragsim::emit_csv(table, path);
    fmt::print(stderr, "wrote {} rows to {}\n", table.rows.size(), path);
  }
}

int cmd_run(const RunFlags& flags) {
  const auto doc = fragsim::parse_config_file(flags.config);
  const auto* scenario = std::get_if<fragsim::Scenario>(&doc);
  if (scenario == nullptr) {
    throw fragsim::ConfigError("", "'run' needs a single-scenario document; "
                                   "use 'sweep' for grids");
  }
  fragsim::SweepSpec spec = fragsim::sweep_for_scenario(*scenario);
  apply_overrides(spec, flags);

  const fragsim::ResultTable table = fragsim::run_sweep(spec);
  // Keep stdout clean when the CSV goes there.
  (flags.out == "-" ? std::cerr : std::cout) << fragsim::emit_summary(table);
  if (!flags.out.empty()) {
    write_table(table, flags.out);
  }

  if (!flags.dump_log.empty()) {
    const fragsim::GridPoint point{scenario->n_nodes,
                                   scenario->radio.spreading_factor,
                                   scenario->duty_cycle, scenario->n_fragments};
    const fragsim::Scenario sim = spec.scenario_at(point);
    std::ofstream log_out(flags.dump_log, std::ios::binary | std::ios::trunc);
    if (!log_out) {
      throw std::runtime_error(
          fmt::format("cannot open '{}' for writing", flags.dump_log));
    }
    for (int rep = 0; rep < sim.n_replications; ++rep) {
      const auto log = fragsim::run_replication(sim, static_cast<std::uint64_t>(rep));
      fragsim::write_log_csv(log_out, log, rep == 0);
    }
    if (!log_out) {
      throw std::runtime_error(
          fmt::format("failed writing '{}'", flags.dump_log));
    }
  }
  return 0;
}

int cmd_sweep(const RunFlags& flags) {
  const auto doc = fragsim::parse_config_file(flags.config);
  const auto* parsed = std::get_if<fragsim::SweepSpec>(&doc);
  fragsim::SweepSpec spec = parsed != nullptr
                                ? *parsed
                                : fragsim::sweep_for_scenario(
                                      std::get<fragsim::Scenario>(doc));
  apply_overrides(spec, flags);
  const std::string out = flags.out.empty() ? spec.output_path : flags.out;

  const fragsim::ResultTable table = fragsim::run_sweep(spec);
  write_table(table, out);
  std::cerr << fragsim::emit_summary(table);
  return 0;
}

int cmd_toa(const ToaFlags& f) {
  fragsim::RadioConfig cfg = fragsim::RadioConfig::with_defaults(f.sf, f.bw > 0 ? f.bw : 1);
  cfg.bandwidth_hz = f.bw;
  cfg.coding_rate_index = f.cr;
  cfg.preamble_symbols = f.preamble;
  cfg.explicit_header = !f.implicit_header;
  cfg.crc_enabled = !f.no_crc;
  if (f.ldro == "on") {
    cfg.low_data_rate_optimize = true;
  } else if (f.ldro == "off") {
    cfg.low_data_rate_optimize = false;
  }
  cfg.validate();
  const auto dc = fragsim::DutyCycleLimit::percent(f.duty_cycle);

  const fragsim::Duration toa = fragsim::time_on_air(cfg, f.bytes);
  fmt::print("SF{} BW {} Hz CR 4/{} preamble {} header {} CRC {} LDRO {}\n",
             cfg.spreading_factor, cfg.bandwidth_hz, 4 + cfg.coding_rate_index,
             cfg.preamble_symbols, cfg.explicit_header ? "explicit" : "implicit",
             cfg.crc_enabled ? "on" : "off",
             cfg.low_data_rate_optimize ? "on" : "off");
  fmt::print("symbol duration   {:.6f} ms\n",
             fragsim::symbol_duration(cfg) * 1e3);
  fmt::print("payload symbols   {}\n", fragsim::payload_symbol_count(cfg, f.bytes));
  fmt::print("time on air       {:.6f} s ({} bytes)\n", fragsim::to_seconds(toa),
             f.bytes);
  fmt::print("nominal bit rate  {:.2f} bps\n", fragsim::nominal_bit_rate(cfg));
  fmt::print("off time at {:g}%   {:.6f} s\n", f.duty_cycle,
             fragsim::to_seconds(fragsim::duty_cycle_off_time(toa, dc)));

  if (f.fragments > 0) {
    const auto base = fragsim::make_fragment_plan(f.payload, 1, f.header);
    const auto plan = fragsim::make_fragment_plan(f.payload, f.fragments, f.header);
    const double a1 = fragsim::to_seconds(fragsim::plan_airtime(base, cfg));
    const double an = fragsim::to_seconds(fragsim::plan_airtime(plan, cfg));
    fmt::print("plan {} x [", plan.fragment_count());
    for (int i = 0; i < plan.fragment_count(); ++i) {
      fmt::print("{}{}", i ? "," : "", plan.on_air_sizes[static_cast<std::size_t>(i)]);
    }
    fmt::print("] bytes\n");
    fmt::print("plan airtime      {:.6f} s (unfragmented {:.6f} s, overhead {:+.3f}%)\n",
               an, a1, 100.0 * (an - a1) / a1);
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  const auto doc = fragsim::parse_config_file(path);
  if (const auto* s = std::get_if<fragsim::Scenario>(&doc)) {
    fmt::print("scenario: {} nodes, SF{}, {} fragment(s), duty cycle {}, "
               "{} replications, horizon {:g} s\n",
               s->n_nodes, s->radio.spreading_factor, s->n_fragments,
               fragsim::describe(s->duty_cycle), s->n_replications,
               fragsim::to_seconds(s->horizon));
  } else {
    const auto& spec = std::get<fragsim::SweepSpec>(doc);
    fmt::print("sweep: {} grid points x {} replications\n", spec.grid().size(),
               spec.base.n_replications);
  }
  return 0;
}

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config, "Configuration document")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "CSV result path ('-' for stdout)");
  cmd->add_option("--seed", flags.seed, "Override the base seed");
  cmd->add_option("--reps", flags.reps, "Override the replication count");
  cmd->add_option("--jobs", flags.jobs, "Worker threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packet fragmentation simulator for duty-cycled LoRa networks"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Simulate one scenario and its unfragmented baseline");
  add_run_flags(run, run_flags);
  run->add_option("--dump-log", run_flags.dump_log,
                  "Write every transmission record to this CSV");

  RunFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  add_run_flags(sweep, sweep_flags);

  ToaFlags toa_flags;
  auto* toa = app.add_subcommand("toa", "Time-on-air calculator");
  toa->add_option("--sf", toa_flags.sf, "Spreading factor (7-12)");
  toa->add_option("--bw", toa_flags.bw, "Bandwidth in Hz");
  toa->add_option("--cr", toa_flags.cr, "Coding rate index (1-4 for 4/5..4/8)");
  toa->add_option("--preamble", toa_flags.preamble, "Preamble symbols");
  toa->add_option("--bytes", toa_flags.bytes, "On-air bytes");
  toa->add_flag("--implicit-header", toa_flags.implicit_header);
  toa->add_flag("--no-crc", toa_flags.no_crc);
  toa->add_option("--ldro", toa_flags.ldro, "auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  toa->add_option("--fragments", toa_flags.fragments,
                  "Also cost a payload split into this many fragments");
  toa->add_option("--payload", toa_flags.payload, "Application payload bytes");
  toa->add_option("--header", toa_flags.header, "Fragment header bytes");
  toa->add_option("--duty-cycle", toa_flags.duty_cycle, "Duty cycle percent");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse a configuration only");
  validate->add_option("--config", validate_path, "Configuration document")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      return cmd_run(run_flags);
    }
    if (*sweep) {
      return cmd_sweep(sweep_flags);
    }
    if (*toa) {
      return cmd_toa(toa_flags);
    }
    return cmd_validate(validate_path);
  } catch (const fragsim::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "invalid argument: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  }
}
