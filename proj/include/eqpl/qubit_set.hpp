#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace eqpl {

// Finite set of qubit indices, kept sorted and duplicate free.
using QubitSet = std::vector<int>;

inline QubitSet make_set(std::vector<int> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

inline bool contains(const QubitSet& s, int q) { return std::binary_search(s.begin(), s.end(), q); }

inline bool is_subset(const QubitSet& a, const QubitSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline QubitSet set_union(const QubitSet& a, const QubitSet& b) {
  QubitSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

inline QubitSet set_minus(const QubitSet& a, const QubitSet& b) {
  QubitSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

inline QubitSet set_intersection(const QubitSet& a, const QubitSet& b) {
  QubitSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

// Bit i of the mask selects s[i]. Subsets of s are enumerated by mask order.
inline QubitSet subset_from_mask(const QubitSet& s, std::uint64_t mask) {
  QubitSet r;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (mask >> i & 1U) r.push_back(s[i]);
  return r;
}

inline std::uint64_t mask_of_subset(const QubitSet& s, const QubitSet& sub) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (contains(sub, s[i])) m |= std::uint64_t{1} << i;
  return m;
}

inline std::vector<QubitSet> all_subsets(const QubitSet& s) {
  std::vector<QubitSet> out;
  const std::uint64_t n = std::uint64_t{1} << s.size();
  out.reserve(n);
  for (std::uint64_t m = 0; m < n; ++m) out.push_back(subset_from_mask(s, m));
  return out;
}

}  // namespace eqpl
