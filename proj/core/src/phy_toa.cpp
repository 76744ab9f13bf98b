#include "fragsim/phy_toa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fragsim {

namespace {

constexpr std::int64_t kNanosPerSecond = 1'000'000'000;

// Symbol periods at or above this need the low data rate optimization.
constexpr double kLdroSymbolThresholdS = 16e-3;

}  // namespace

void RadioConfig::validate() const {
  if (spreading_factor < 7 || spreading_factor > 12) {
    throw std::invalid_argument("spreading_factor must be in [7, 12], got " +
                                std::to_string(spreading_factor));
  }
  if (bandwidth_hz <= 0) {
    throw std::invalid_argument("bandwidth_hz must be positive");
  }
  if (coding_rate_index < 1 || coding_rate_index > 4) {
    throw std::invalid_argument("coding_rate_index must be in [1, 4], got " +
                                std::to_string(coding_rate_index));
  }
  if (preamble_symbols < 1 || preamble_symbols > 65535) {
    throw std::invalid_argument("preamble_symbols must be in [1, 65535]");
  }
}

bool low_data_rate_required(int spreading_factor, std::int64_t bandwidth_hz) {
  const double tsym = std::ldexp(1.0, spreading_factor) /
                      static_cast<double>(bandwidth_hz);
  return tsym >= kLdroSymbolThresholdS;
}

RadioConfig RadioConfig::with_defaults(int spreading_factor,
                                       std::int64_t bandwidth_hz) {
  RadioConfig cfg;
  cfg.spreading_factor = spreading_factor;
  cfg.bandwidth_hz = bandwidth_hz;
  cfg.low_data_rate_optimize =
      bandwidth_hz > 0 && low_data_rate_required(spreading_factor, bandwidth_hz);
  return cfg;
}

DutyCycleLimit DutyCycleLimit::percent(double value) {
  if (!(value > 0.0 && value <= 100.0)) {
    throw std::invalid_argument("duty cycle percent must be in (0, 100]");
  }
  DutyCycleLimit dc;
  dc.percent_ = value;
  return dc;
}

double symbol_duration(const RadioConfig& cfg) {
  cfg.validate();
  return std::ldexp(1.0, cfg.spreading_factor) /
         static_cast<double>(cfg.bandwidth_hz);
}

int payload_symbol_count(const RadioConfig& cfg, int payload_bytes) {
  cfg.validate();
  if (payload_bytes < 1) {
    throw std::invalid_argument("payload_bytes must be at least 1");
  }
  const int de = cfg.low_data_rate_optimize ? 1 : 0;
  const int ih = cfg.explicit_header ? 0 : 1;
  const int crc = cfg.crc_enabled ? 1 : 0;
  const int denom = 4 * (cfg.spreading_factor - 2 * de);
  if (denom <= 0) {
    throw std::invalid_argument("SF - 2*LDRO must be positive");
  }
  const int num = 8 * payload_bytes - 4 * cfg.spreading_factor + 28 +
                  16 * crc - 20 * ih;
  // Ceiling division valid for negative numerators too.
  const int blocks = num > 0 ? (num + denom - 1) / denom : -((-num) / denom);
  return 8 + std::max(blocks * (cfg.coding_rate_index + 4), 0);
}

Duration time_on_air(const RadioConfig& cfg, int on_air_bytes) {
  const std::int64_t payload = payload_symbol_count(cfg, on_air_bytes);
  // Work in quarter symbols so the 4.25-symbol sync overhead stays integral.
  const std::int64_t quarter_symbols =
      4 * static_cast<std::int64_t>(cfg.preamble_symbols) + 17 + 4 * payload;
  const std::int64_t num = quarter_symbols << cfg.spreading_factor;
  const std::int64_t den = 4 * cfg.bandwidth_hz;
  const std::int64_t whole = num / den;
  const std::int64_t rem = num % den;
  const std::int64_t frac = (rem * kNanosPerSecond * 2 + den) / (2 * den);
  return Duration{whole * kNanosPerSecond + frac};
}

double nominal_bit_rate(const RadioConfig& cfg) {
  cfg.validate();
  const double symbols_per_s = static_cast<double>(cfg.bandwidth_hz) /
                               std::ldexp(1.0, cfg.spreading_factor);
  return cfg.spreading_factor * symbols_per_s * 4.0 /
         (4.0 + cfg.coding_rate_index);
}

Duration duty_cycle_off_time(Duration toa, const DutyCycleLimit& dc) {
  if (dc.is_unrestricted()) {
    return Duration::zero();
  }
  const double p = *dc.percent_value();
  const double whole = std::floor(p);
  if (whole == p) {
    const auto pi = static_cast<std::int64_t>(p);
    return Duration{(toa.count() * (100 - pi) * 2 + pi) / (2 * pi)};
  }
  const long double off = static_cast<long double>(toa.count()) *
                          (100.0L - p) / static_cast<long double>(p);
  return Duration{std::llround(off)};
}

double duty_cycle_off_time(double toa_seconds, const DutyCycleLimit& dc) {
  if (dc.is_unrestricted()) {
    return 0.0;
  }
  const double p = *dc.percent_value();
  return toa_seconds * (100.0 - p) / p;
}

}  // namespace fragsim
