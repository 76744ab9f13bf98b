#include "fragsim/fragmenter.hpp"

#include <stdexcept>
#include <string>

namespace fragsim {

FragmentPlan make_fragment_plan(int payload_bytes, int n_fragments,
                                int header_bytes) {
  if (n_fragments < 1) {
    throw std::invalid_argument("n_fragments must be at least 1");
  }
  if (header_bytes < 0) {
    throw std::invalid_argument("header_bytes must be non-negative");
  }
  if (payload_bytes < n_fragments) {
    throw std::invalid_argument(
        "n_fragments (" + std::to_string(n_fragments) +
        ") exceeds payload_bytes (" + std::to_string(payload_bytes) +
        "): a fragment would carry no application data");
  }

  FragmentPlan plan;
  plan.payload_bytes = payload_bytes;
  plan.header_bytes = header_bytes;
  plan.on_air_sizes.reserve(static_cast<std::size_t>(n_fragments));
  const int share = payload_bytes / n_fragments;
  const int larger = payload_bytes % n_fragments;
  for (int i = 0; i < n_fragments; ++i) {
    plan.on_air_sizes.push_back(share + (i < larger ? 1 : 0) + header_bytes);
  }
  return plan;
}

Duration plan_airtime(const FragmentPlan& plan, const RadioConfig& cfg) {
  Duration total{0};
  for (int size : plan.on_air_sizes) {
    total += time_on_air(cfg, size);
  }
  return total;
}

}  // namespace fragsim
