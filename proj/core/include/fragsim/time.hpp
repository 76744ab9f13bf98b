#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

namespace fragsim {

/// Simulation clock. Every timestamp and duration is an integer count of
/// nanoseconds so that event ordering and equality are exact.
using Duration = std::chrono::nanoseconds;
using Timestamp = std::chrono::nanoseconds;

/// Rounds to the nearest nanosecond.
inline Duration from_seconds(double seconds) {
  return Duration{std::llround(seconds * 1e9)};
}

inline double to_seconds(Duration d) {
  return static_cast<double>(d.count()) * 1e-9;
}

}  // namespace fragsim
