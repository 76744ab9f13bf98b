#include "fragsim/rng.hpp"

#include <cmath>

namespace fragsim {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::initializer_list<std::uint64_t> values) {
  std::uint64_t h = 0x6A09E667F3BCC908ULL;
  for (std::uint64_t v : values) {
    h = mix64(h + kGolden + mix64(v));
  }
  return h;
}

SplitMix64::result_type SplitMix64::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform_open_closed() {
  return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

double SplitMix64::exponential(double mean) {
  return -mean * std::log(uniform_open_closed());
}

}  // namespace fragsim
