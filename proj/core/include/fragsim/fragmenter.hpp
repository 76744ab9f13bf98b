#pragma once

#include <vector>

#include "fragsim/phy_toa.hpp"
#include "fragsim/time.hpp"

namespace fragsim {

/// How one application payload is cut into on-air fragments.
///
/// The split is balanced: the first `payload_bytes % n_fragments` fragments
/// carry one extra application byte. Every fragment, including the single
/// unit of an unfragmented packet, carries `header_bytes` of fragmentation
/// header.
struct FragmentPlan {
  int payload_bytes = 0;
  int header_bytes = 0;
  /// On-air size of each fragment, header included, in transmit order.
  std::vector<int> on_air_sizes;

  int fragment_count() const { return static_cast<int>(on_air_sizes.size()); }
  int application_bytes(int fragment_index) const {
    return on_air_sizes.at(fragment_index) - header_bytes;
  }
};

/// Throws std::invalid_argument when n_fragments < 1, header_bytes < 0 or a
/// fragment would carry no application byte.
FragmentPlan make_fragment_plan(int payload_bytes, int n_fragments,
                                int header_bytes = 1);

/// Sum of the per-fragment times on air.
Duration plan_airtime(const FragmentPlan& plan, const RadioConfig& cfg);

}  // namespace fragsim
