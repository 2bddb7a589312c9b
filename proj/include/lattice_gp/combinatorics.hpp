#pragma once

#include <cstddef>
#include <type_traits>
#include <vector>

namespace lgp {

// Advances `idx` to the next k-subset of {0..m-1} in lexicographic order.
// Returns false after the last subset.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t m) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
  if (i == 0) return false;
  ++idx[i - 1];
  for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

// Calls f(indices) for every k-subset of {0..m-1}; f returns false to stop early.
template <class F>
void for_each_combination(std::size_t m, std::size_t k, F&& f) {
  if (k > m) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  do {
    if constexpr (std::is_same_v<decltype(f(idx)), bool>) {
      if (!f(static_cast<const std::vector<std::size_t>&>(idx))) return;
    } else {
      f(static_cast<const std::vector<std::size_t>&>(idx));
    }
  } while (k > 0 && next_combination(idx, m));
}

}  // namespace lgp
