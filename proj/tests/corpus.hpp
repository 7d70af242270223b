#pragma once

// Shared test fixtures: brute-force oracles and a seeded random-space
// corpus. Oracles are deliberately naive re-derivations of the library
// semantics so library and oracle can only agree by both being right.

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "cvx/space.hpp"

namespace testutil {

// Hull straight from the definition: intersection of all convex supersets.
inline cvx::SubsetMask hull_oracle(const cvx::ConvexitySpace& s, cvx::SubsetMask p) {
  cvx::SubsetMask acc = cvx::full_mask(s.n);
  for (cvx::SubsetMask c : s.convex_sets)
    if ((p & ~c) == 0) acc &= c;
  return acc;
}

// Checks closure under pairwise intersection by direct double loop.
inline bool intersection_closed_oracle(const cvx::ConvexitySpace& s) {
  for (auto a : s.convex_sets)
    for (auto b : s.convex_sets) {
      cvx::SubsetMask c = a & b;
      if (!std::binary_search(s.convex_sets.begin(), s.convex_sets.end(), c)) return false;
    }
  return true;
}

// Labeled brute force over all assignments of the points of `pts` to k
// labeled parts; reports whether some surjective assignment gives parts
// whose hulls share a point. Exponential and only for cross-checking.
inline bool tverberg_exists_oracle(const cvx::ConvexitySpace& s, cvx::SubsetMask pts, int k) {
  std::vector<int> elems = cvx::mask_indices(pts);
  int m = static_cast<int>(elems.size());
  if (m < k) return false;
  std::vector<int> label(m, 0);
  while (true) {
    std::vector<cvx::SubsetMask> parts(k, 0);
    for (int i = 0; i < m; ++i) parts[label[i]] |= cvx::bit(elems[i]);
    bool surjective = true;
    for (auto p : parts)
      if (!p) surjective = false;
    if (surjective) {
      cvx::SubsetMask common = cvx::full_mask(s.n);
      for (auto p : parts) common &= hull_oracle(s, p);
      if (common) return true;
    }
    int i = 0;
    while (i < m && label[i] == k - 1) label[i++] = 0;
    if (i == m) break;
    ++label[i];
  }
  return false;
}

// Seeded random spaces: closure of a handful of random generator sets.
inline cvx::ConvexitySpace random_space(std::mt19937& rng, int max_n = 8) {
  std::uniform_int_distribution<int> nd(2, max_n);
  int n = nd(rng);
  std::uniform_int_distribution<int> gd(1, 6);
  int g = gd(rng);
  std::uniform_int_distribution<cvx::SubsetMask> md(0, cvx::full_mask(n));
  std::vector<cvx::SubsetMask> gens;
  for (int i = 0; i < g; ++i) gens.push_back(md(rng));
  return cvx::intersection_closure(gens, n);
}

inline std::vector<cvx::ConvexitySpace> builtin_corpus() {
  std::vector<cvx::ConvexitySpace> out;
  for (int n = 2; n <= 9; ++n) out.push_back(cvx::make_interval_space(n));
  for (int n = 2; n <= 9; ++n) out.push_back(cvx::make_singleton_space(n));
  for (int n = 2; n <= 5; ++n) out.push_back(cvx::make_free_space(n));
  out.push_back(cvx::make_box_space({2, 2}));
  out.push_back(cvx::make_box_space({2, 3}));
  out.push_back(cvx::make_box_space({3, 3}));
  return out;
}

}  // namespace testutil
