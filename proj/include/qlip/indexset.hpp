#pragma once

#include <algorithm>
#include <vector>

namespace qlip {

// Index sets are sorted ascending, 0-based internally (1-based at the CLI).
using IndexSet = std::vector<int>;

/// All subsets of `pool` with cardinality <= max_card, in
/// cardinality-then-lexicographic order (the deterministic enumeration
/// order used everywhere).
inline std::vector<IndexSet> subsets_by_cardinality(const IndexSet& pool,
                                                    std::size_t max_card) {
  std::vector<IndexSet> out;
  const std::size_t k = pool.size();
  max_card = std::min(max_card, k);
  for (std::size_t card = 0; card <= max_card; ++card) {
    std::vector<std::size_t> pick(card);
    for (std::size_t i = 0; i < card; ++i) pick[i] = i;
    while (true) {
      IndexSet s(card);
      for (std::size_t i = 0; i < card; ++i) s[i] = pool[pick[i]];
      out.push_back(std::move(s));
      if (card == 0) break;
      // advance combination
      std::size_t i = card;
      while (i-- > 0) {
        if (pick[i] + (card - i) < k) {
          ++pick[i];
          for (std::size_t j = i + 1; j < card; ++j) pick[j] = pick[j - 1] + 1;
          break;
        }
        if (i == 0) goto next_card;
      }
    }
  next_card:;
  }
  return out;
}

inline bool is_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool is_proper_subset(const IndexSet& a, const IndexSet& b) {
  return a.size() < b.size() && is_subset(a, b);
}

}  // namespace qlip
