#include <algorithm>
#include <numeric>
#include <vector>

#include "fragsim/sim_engine.hpp"

namespace fragsim {

namespace {

// Records sorted by start: a record overlaps an earlier one iff its start is
// before the largest earlier end, and a later one iff the next start is
// before its own end.
template <typename At>
void sweep(std::size_t n, At at) {
  Timestamp max_end = Timestamp::min();
  for (std::size_t k = 0; k < n; ++k) {
    TransmissionRecord& r = at(k);
    const bool hit_prev = k > 0 && r.start < max_end;
    const bool hit_next = k + 1 < n && at(k + 1).start < r.end;
    r.collided = hit_prev || hit_next;
    max_end = std::max(max_end, r.end);
  }
}

}  // namespace

void detect_collisions(std::span<TransmissionRecord> records) {
  const auto by_start = [](const TransmissionRecord& a,
                           const TransmissionRecord& b) {
    return a.start < b.start;
  };
  if (std::is_sorted(records.begin(), records.end(), by_start)) {
    sweep(records.size(),
          [&](std::size_t k) -> TransmissionRecord& { return records[k]; });
    return;
  }
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return records[a].start < records[b].start;
                   });
  sweep(order.size(), [&](std::size_t k) -> TransmissionRecord& {
    return records[order[k]];
  });
}

}  // namespace fragsim
