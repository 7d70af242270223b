#pragma once

// The theory of spaces whose second Radon number is exactly 3: each point p
// of a chosen point set P gets a nerve family F_p containing {p}, and those
// families obey three exchange properties (J1-J3).  The properties drive a
// constructive recursion producing, for any k, k disjoint subsets of P all
// lying in a single family — so such spaces have k-th Radon number at most
// 2(k-1)+1 — and a pigeonhole "selection" statistic: some point of the
// space lies in the hulls of at least C(n,3)/n of the C(n,2) pairs of P.

#include <cstdint>
#include <vector>

#include "cvx/budget.hpp"
#include "cvx/nerve.hpp"
#include "cvx/space.hpp"
#include "cvx/upfamily.hpp"

namespace cvx {

struct JamisonSystem {
  std::vector<int> pts;            // points of P, ascending ground indices
  std::vector<UpFamily> families;  // F_p per point, over local ground [0,|P|)
  std::vector<int> witnesses;      // ground point realizing F_p (= pts[i])
};

// Builds {F_p}: for each p, its own trace family {S ⊆ P : p ∈ hull(S)},
// realized in the nerve with witness p.  The three properties are verified
// post-hoc:
//   J1: {p} ∈ F_p
//   J2: every triple p,q,r has {p,q} ∈ F_r or {p,r} ∈ F_q or {q,r} ∈ F_p
//   J3: {q,r} ∈ F_p and {r,s} ∈ F_q imply {r,s} ∈ F_p  (distinct p,q,r,s)
// J1 and J3 hold in every space by hull algebra.  J2 asks each triple for a
// point-in-pair-hull split; with the second Radon number equal to 3 this is
// guaranteed whenever the triple's singletons have trivial hulls (so always
// on spaces whose singletons are all convex), and its failure — possible
// only through a non-convex singleton hull — throws property_violation
// naming the triple.  Maximal trace families containing {p} are NOT used:
// on spaces with non-convex singleton hulls every such choice can violate
// J3, while the point's own trace family never does.
// Throws std::invalid_argument unless the space's second Radon number is
// exactly 3, and budget_error when 2^|P| exceeds the lattice cap.
JamisonSystem build_jamison_system(const ConvexitySpace& space, SubsetMask points,
                                   std::size_t lattice_cap = kDefaultLatticeCap);

struct JamisonTverberg {
  std::vector<SubsetMask> parts;   // k pairwise disjoint local subsets of P
  std::size_t family_index = 0;    // every part is a member of
                                   // families[family_index]
};

// The constructive recursion: repeatedly take the lexicographically first
// pair {p,q} of the remaining points that is a member of F_r for every other
// remaining r, set it aside, and recurse; the leftover points form the final
// part, and all k parts land in the family of the smallest leftover point.
// Requires |P| >= 2(k-1)+1.  Failure to find a pair throws
// property_violation with a dump of the remaining state (it would falsify
// the r_k <= 2(k-1)+1 theorem for this space).
JamisonTverberg jamison_tverberg(const JamisonSystem& sys, int k);

struct SelectionResult {
  int best_point = -1;   // smallest maximizer over the whole ground set
  std::int64_t count = 0;  // pairs {q,r} of P with best_point in hull({q,r})
};

// Exact maximum over ground points of the number of pair hulls covering the
// point.  Requires |P| >= 3.  When every triple of P splits into a pair and
// a point with intersecting hulls (true whenever the second Radon number is
// 3), each of the C(|P|,3) triples charges some point through one of its
// pairs, so count * |P| >= C(|P|,3); that bound is asserted and its failure
// throws property_violation.
SelectionResult selection_statistic(const ConvexitySpace& space, SubsetMask points);

}  // namespace cvx
