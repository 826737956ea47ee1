#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace zol {

/// Re-sorts a permutation by new key values. Expected O(n + inversions), so
/// nearly-sorted inputs cost about one linear pass. Ties order by slot index
/// (a strict total order, so the result does not depend on history).
/// Returns the number of element moves, for cost accounting.
inline std::size_t insertion_sort_order(std::vector<std::uint32_t>& order,
                                        const std::vector<double>& key) {
  std::size_t moves = 0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const std::uint32_t slot = order[i];
    const double k = key[slot];
    std::size_t j = i;
    while (j > 0) {
      const std::uint32_t prev = order[j - 1];
      if (key[prev] < k || (key[prev] == k && prev < slot)) break;
      order[j] = prev;
      --j;
      ++moves;
    }
    order[j] = slot;
  }
  return moves;
}

}  // namespace zol
