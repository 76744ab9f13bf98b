#pragma once

#include <cstdint>
#include <optional>

#include "fragsim/time.hpp"

namespace fragsim {

/// LoRa modem settings that determine airtime.
struct RadioConfig {
  int spreading_factor = 7;
  std::int64_t bandwidth_hz = 125000;
  /// Coding rate 4/(4 + coding_rate_index).
  int coding_rate_index = 1;
  int preamble_symbols = 8;
  bool explicit_header = true;
  bool crc_enabled = true;
  bool low_data_rate_optimize = false;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  /// Config with the usual defaults and LDRO switched on where the modem
  /// requires it (symbol period of 16 ms or more, i.e. SF11/SF12 at 125 kHz).
  static RadioConfig with_defaults(int spreading_factor,
                                   std::int64_t bandwidth_hz = 125000);
};

bool low_data_rate_required(int spreading_factor, std::int64_t bandwidth_hz);

/// Regulatory duty-cycle cap. An empty limit means unrestricted.
class DutyCycleLimit {
 public:
  static DutyCycleLimit unrestricted() { return DutyCycleLimit{}; }
  /// percent must lie in (0, 100].
  static DutyCycleLimit percent(double value);

  bool is_unrestricted() const { return !percent_.has_value(); }
  /// 100 for the unrestricted limit, which carries the same zero pause.
  double percent_or_full() const { return percent_.value_or(100.0); }
  std::optional<double> percent_value() const { return percent_; }

  friend bool operator==(const DutyCycleLimit&, const DutyCycleLimit&) = default;

 private:
  DutyCycleLimit() = default;
  std::optional<double> percent_;
};

/// 2^SF / BW in seconds.
double symbol_duration(const RadioConfig& cfg);

/// Payload symbols from the SX127x datasheet formula:
///   8 + max(ceil((8PL - 4SF + 28 + 16CRC - 20IH) / (4(SF - 2DE))) * (CR + 4), 0)
int payload_symbol_count(const RadioConfig& cfg, int payload_bytes);

/// Preamble (programmed symbols + 4.25) plus payload symbols, times the
/// symbol period, rounded to the nearest nanosecond.
Duration time_on_air(const RadioConfig& cfg, int on_air_bytes);

/// Report-only rate SF * BW / 2^SF * 4 / (4 + CR). Never used for timing.
double nominal_bit_rate(const RadioConfig& cfg);

/// toa * (100 - DC) / DC; zero when unrestricted.
Duration duty_cycle_off_time(Duration toa, const DutyCycleLimit& dc);
double duty_cycle_off_time(double toa_seconds, const DutyCycleLimit& dc);

}  // namespace fragsim
