#pragma once

#include <cstdint>
#include <initializer_list>

namespace fragsim {

/// SplitMix64 output finalizer (Stafford variant 13).
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive hash of a tuple of 64-bit values. Used to key random
/// streams and to derive per-grid-point seeds, so adding a new coordinate
/// value never moves the streams of existing ones.
std::uint64_t hash_combine(std::initializer_list<std::uint64_t> values);

/// SplitMix64 generator. A stream is fully determined by its key, so any
/// (seed, replication, node) triple can be replayed in isolation.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t key) : state_{key} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on (0, 1] with 53 bits of resolution.
  double uniform_open_closed();

  /// Exponential variate with the given mean, by inverse CDF.
  double exponential(double mean);

 private:
  std::uint64_t state_;
};

}  // namespace fragsim
