#include "fragsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace fragsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

template <typename T>
T parse_number(const std::string& key, std::string_view raw,
               std::string_view what) {
  T value{};
  const char* end = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(raw.data(), end, value);
  if (raw.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError(key, fmt::format("expected {}, got '{}'", what, raw));
  }
  return value;
}

int parse_int(const std::string& key, std::string_view raw) {
  return parse_number<int>(key, raw, "an integer");
}

double parse_double(const std::string& key, std::string_view raw) {
  return parse_number<double>(key, raw, "a number");
}

bool parse_bool(const std::string& key, std::string_view raw) {
  const std::string v = lower(raw);
  if (v == "true" || v == "yes" || v == "on" || v == "1") {
    return true;
  }
  if (v == "false" || v == "no" || v == "off" || v == "0") {
    return false;
  }
  throw ConfigError(key, fmt::format("expected true or false, got '{}'", raw));
}

DutyCycleLimit parse_duty_cycle(const std::string& key, std::string_view raw) {
  if (lower(raw) == "unrestricted" || lower(raw) == "none") {
    return DutyCycleLimit::unrestricted();
  }
  std::string_view number = raw;
  if (!number.empty() && number.back() == '%') {
    number = trim(number.substr(0, number.size() - 1));
  }
  const double pct = parse_double(key, number);
  if (!(pct > 0.0 && pct <= 100.0)) {
    throw ConfigError(key, "duty cycle must be in (0, 100] percent or "
                           "'unrestricted'");
  }
  return DutyCycleLimit::percent(pct);
}

std::vector<std::string_view> split_list(std::string_view raw) {
  std::vector<std::string_view> items;
  while (!raw.empty()) {
    const auto comma = raw.find(',');
    items.push_back(trim(raw.substr(0, comma)));
    if (comma == std::string_view::npos) {
      break;
    }
    raw.remove_prefix(comma + 1);
  }
  return items;
}

template <typename T, typename ParseOne>
std::vector<T> parse_list(const std::string& key, std::string_view raw,
                          ParseOne parse_one) {
  std::vector<T> out;
  for (std::string_view item : split_list(raw)) {
    if (item.empty()) {
      throw ConfigError(key, "empty list element");
    }
    out.push_back(parse_one(key, item));
  }
  if (out.empty()) {
    throw ConfigError(key, "list must not be empty");
  }
  return out;
}

Duration parse_seconds(const std::string& key, std::string_view raw) {
  const double s = parse_double(key, raw);
  if (!(s > 0.0)) {
    throw ConfigError(key, "must be a positive number of seconds");
  }
  return from_seconds(s);
}

const std::set<std::string, std::less<>> kScenarioKeys = {
    "n_nodes",        "sf",          "bw_hz",           "coding_rate",
    "preamble_symbols", "explicit_header", "crc",       "ldro",
    "payload_bytes",  "header_bytes", "n_fragments",    "mean_interval_s",
    "duty_cycle",     "horizon_s",   "replications",    "seed",
    "queue_policy",   "arrival_law",
};

const std::set<std::string, std::less<>> kSweepKeys = {
    "node_counts", "fragment_counts", "spreading_factors",
    "duty_cycles", "output",          "jobs",
};

using Entries = std::map<std::string, std::string, std::less<>>;

Entries tokenize(std::string_view text) {
  Entries entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", fmt::format("line {}: expected 'key = value'",
                                        line_no));
    }
    std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("", fmt::format("line {}: missing key", line_no));
    }
    if (!kScenarioKeys.contains(key) && !kSweepKeys.contains(key)) {
      throw ConfigError(key, fmt::format("unknown key (line {})", line_no));
    }
    if (value.empty()) {
      throw ConfigError(key, "missing value");
    }
    if (!entries.emplace(key, std::string{value}).second) {
      throw ConfigError(key, "duplicate key");
    }
  }
  return entries;
}

// Rethrows scenario invariant violations as ConfigError against the key the
// violated field is read from.
std::string key_for_message(const std::string& message) {
  static const std::pair<std::string_view, std::string_view> kFields[] = {
      {"n_fragments", "n_fragments"},   {"n_nodes", "n_nodes"},
      {"payload_bytes", "payload_bytes"}, {"header_bytes", "header_bytes"},
      {"spreading_factor", "sf"},       {"bandwidth_hz", "bw_hz"},
      {"coding_rate_index", "coding_rate"},
      {"preamble_symbols", "preamble_symbols"},
      {"mean_interval", "mean_interval_s"}, {"horizon", "horizon_s"},
      {"n_replications", "replications"},   {"SF - 2*LDRO", "ldro"},
  };
  for (const auto& [needle, key] : kFields) {
    if (message.find(needle) != std::string::npos) {
      return std::string{key};
    }
  }
  return {};
}

void validate_scenario(const Scenario& s) {
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key_for_message(e.what()), e.what());
  }
}

Scenario build_scenario(const Entries& e, std::optional<bool>& ldro) {
  Scenario s;
  int sf = 7;
  std::int64_t bw = 125000;
  if (auto it = e.find("sf"); it != e.end()) {
    sf = parse_int(it->first, it->second);
  }
  if (auto it = e.find("bw_hz"); it != e.end()) {
    bw = parse_number<std::int64_t>(it->first, it->second, "an integer");
  }
  if (auto it = e.find("ldro"); it != e.end()) {
    if (lower(it->second) != "auto") {
      ldro = parse_bool(it->first, it->second);
    }
  }
  s.radio = RadioConfig::with_defaults(sf, bw > 0 ? bw : 1);
  s.radio.bandwidth_hz = bw;
  if (ldro) {
    s.radio.low_data_rate_optimize = *ldro;
  }

  for (const auto& [key, raw] : e) {
    if (key == "n_nodes") {
      s.n_nodes = parse_int(key, raw);
    } else if (key == "coding_rate") {
      s.radio.coding_rate_index = parse_int(key, raw);
    } else if (key == "preamble_symbols") {
      s.radio.preamble_symbols = parse_int(key, raw);
    } else if (key == "explicit_header") {
      s.radio.explicit_header = parse_bool(key, raw);
    } else if (key == "crc") {
      s.radio.crc_enabled = parse_bool(key, raw);
    } else if (key == "payload_bytes") {
      s.payload_bytes = parse_int(key, raw);
    } else if (key == "header_bytes") {
      s.header_bytes = parse_int(key, raw);
    } else if (key == "n_fragments") {
      s.n_fragments = parse_int(key, raw);
    } else if (key == "mean_interval_s") {
      s.mean_interval = parse_seconds(key, raw);
    } else if (key == "duty_cycle") {
      s.duty_cycle = parse_duty_cycle(key, raw);
    } else if (key == "horizon_s") {
      s.horizon = parse_seconds(key, raw);
    } else if (key == "replications") {
      s.n_replications = parse_int(key, raw);
    } else if (key == "seed") {
      s.base_seed = parse_number<std::uint64_t>(key, raw, "a 64-bit unsigned integer");
    } else if (key == "queue_policy") {
      const std::string v = lower(raw);
      if (v == "fifo") {
        s.queue_policy = QueuePolicy::fifo;
      } else if (v == "drop") {
        s.queue_policy = QueuePolicy::drop;
      } else {
        throw ConfigError(key, fmt::format("expected fifo or drop, got '{}'", raw));
      }
    } else if (key == "arrival_law") {
      const std::string v = lower(raw);
      if (v == "poisson") {
        s.arrival_law = ArrivalLaw::poisson;
      } else if (v == "periodic") {
        s.arrival_law = ArrivalLaw::periodic;
      } else {
        throw ConfigError(key, fmt::format("expected poisson or periodic, got '{}'", raw));
      }
    }
  }
  return s;
}

}  // namespace

ConfigDocument parse_config(std::string_view text) {
  const Entries entries = tokenize(text);
  std::optional<bool> ldro;
  Scenario scenario = build_scenario(entries, ldro);

  const bool is_sweep = std::any_of(
      entries.begin(), entries.end(),
      [](const auto& kv) { return kSweepKeys.contains(kv.first) &&
                                  kv.first != "output" && kv.first != "jobs"; });
  if (!is_sweep) {
    for (const auto& [key, raw] : entries) {
      if (kSweepKeys.contains(key)) {
        throw ConfigError(key, "only valid in a sweep document");
      }
    }
    validate_scenario(scenario);
    return scenario;
  }

  SweepSpec spec;
  spec.base = scenario;
  spec.ldro_override = ldro;
  const auto conflicting = [&](std::string_view axis, std::string_view scalar) {
    if (entries.contains(axis) && entries.contains(scalar)) {
      throw ConfigError(std::string{scalar},
                        fmt::format("conflicts with {}", axis));
    }
  };
  conflicting("node_counts", "n_nodes");
  conflicting("fragment_counts", "n_fragments");
  conflicting("spreading_factors", "sf");
  conflicting("duty_cycles", "duty_cycle");

  spec.node_counts = {scenario.n_nodes};
  spec.fragment_counts = {scenario.n_fragments};
  spec.spreading_factors = {scenario.radio.spreading_factor};
  spec.duty_cycles = {scenario.duty_cycle};
  for (const auto& [key, raw] : entries) {
    if (key == "node_counts") {
      spec.node_counts = parse_list<int>(key, raw, parse_int);
    } else if (key == "fragment_counts") {
      spec.fragment_counts = parse_list<int>(key, raw, parse_int);
    } else if (key == "spreading_factors") {
      spec.spreading_factors = parse_list<int>(key, raw, parse_int);
    } else if (key == "duty_cycles") {
      spec.duty_cycles = parse_list<DutyCycleLimit>(key, raw, parse_duty_cycle);
    } else if (key == "output") {
      spec.output_path = raw;
    } else if (key == "jobs") {
      spec.jobs = parse_int(key, raw);
    }
  }
  // The base scenario only has to be valid at the swept values.
  spec.base.n_fragments = 1;
  spec.validate();
  return spec;
}

ConfigDocument parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", fmt::format("cannot read config file '{}'",
                                      path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace fragsim
