#pragma once

// Finite convexity spaces: a ground set [0, n) together with a family of
// convex sets that contains the empty set and the full ground set and is
// closed under pairwise intersection. Hulls are computed by intersecting
// all convex supersets.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvx/mask.hpp"

namespace cvx {

struct ConvexitySpace {
  int n = 0;
  std::vector<SubsetMask> convex_sets;  // sorted ascending, no duplicates
};

struct SpaceValidation {
  bool ok = true;
  std::string detail;  // first violation found, empty when ok
};

inline constexpr std::size_t kDefaultClosureCap = std::size_t{1} << 20;

// Smallest convexity space whose convex sets include all generators.
// Throws budget_error if the closure would exceed `cap` sets.
ConvexitySpace intersection_closure(const std::vector<SubsetMask>& generators, int n,
                                    std::size_t cap = kDefaultClosureCap);

SubsetMask hull(const ConvexitySpace& space, SubsetMask points);

// Hull of every subset of the ground set, indexed by mask. Requires n <= 24.
std::vector<SubsetMask> all_hulls(const ConvexitySpace& space);

SpaceValidation is_valid_space(const ConvexitySpace& space);

ConvexitySpace make_interval_space(int n);
ConvexitySpace make_singleton_space(int n);
ConvexitySpace make_free_space(int n);
// Points of the box space are tuples over the given axis sizes, indexed
// row-major; convex sets are axis-aligned sub-boxes.
ConvexitySpace make_box_space(const std::vector<int>& dims);

// Accepts "interval:N", "singleton:N", "free:N", "box:AxB[xC...]".
ConvexitySpace parse_space_spec(const std::string& spec);

std::string space_to_json(const ConvexitySpace& space);
ConvexitySpace space_from_json(const std::string& text);
ConvexitySpace space_from_stream(std::istream& in);

}  // namespace cvx
