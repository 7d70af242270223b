#pragma once

// Combinatorial toolkit behind upper bounds on Radon numbers: shadows of
// multidimensional uniform set families and their Kruskal–Katona-type lower
// bound, counting of tuples with r pairwise disjoint coordinates against a
// forest union bound, Turán-threshold independent sets in uniform
// hypergraphs, a local-to-global independence transfer, and two constructive
// recursions that place many pairwise disjoint subsets inside a single nerve
// family.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cvx/budget.hpp"
#include "cvx/mask.hpp"
#include "cvx/nerve.hpp"
#include "cvx/space.hpp"
#include "cvx/upfamily.hpp"

namespace cvx {

// ---------------------------------------------------------------------------
// d-dimensional r-uniform families: sets of d-tuples of r-element subsets of
// [0, ground_size).

struct TupleFamily {
  int d = 1;           // coordinates per tuple
  int r = 0;           // elements per coordinate set
  int ground_size = 0;
  // Each tuple is a vector of exactly d masks, every mask of popcount r.
  // Kept sorted lexicographically with no duplicates.
  std::vector<std::vector<SubsetMask>> tuples;

  bool operator==(const TupleFamily&) const = default;
};

// Validates coordinate sizes and ground bounds, sorts and deduplicates.
TupleFamily make_tuple_family(int d, int r, int ground_size,
                              std::vector<std::vector<SubsetMask>> tuples);

// All binomial(ground_size, r)^d tuples; throws budget_error above `cap`.
TupleFamily full_tuple_family(int d, int r, int ground_size, std::uint64_t cap = 1'000'000);

// The shadow ∂F: every way of removing exactly one element from each
// coordinate of each tuple, deduplicated; uniformity drops to r - 1.
// Throws std::domain_error when r = 0.
TupleFamily shadow(const TupleFamily& f);

// x(x-1)...(x-r+1)/r! for real x (1 when r = 0).
double generalized_binomial(double x, int r);

// The unique real x >= r with binomial(x, r)^d = v, found by bisection on
// [r, r + v] to relative tolerance 1e-12. Requires v >= 1, r >= 1, d >= 1.
double invert_binomial(double v, int r, int d);

struct KkReport {
  std::uint64_t family_size = 0;
  std::uint64_t shadow_size = 0;
  double x = 0.0;      // binomial(x, r)^d = family_size
  double bound = 0.0;  // binomial(x, r-1)^d
  double slack = 0.0;  // shadow_size - bound (>= -1e-6 always)
};

// The shadow lower bound |∂F| >= binomial(x, r-1)^d where binomial(x, r)^d =
// |F|. Requires a non-empty family; a violation beyond 1e-6 absolute slack
// throws property_violation (it would disprove a theorem).
KkReport check_kk_bound(const TupleFamily& f);

// ---------------------------------------------------------------------------
// r-good tuples: d-tuples of sets among which some r are pairwise disjoint.

// Decided on the intersection graph of the coordinates (vertices i, edges
// where the sets meet): r-good iff it has an independent set of size r.
bool is_r_good(const std::vector<SubsetMask>& tuple, int r);

// Number of forests (acyclic simple graphs) on d labeled vertices, counted
// by exhaustive enumeration; the constant of the r-bad union bound.
// 1, 2, 7, 38, 291, 2932 for d = 1..6; d > 7 is rejected.
std::uint64_t labeled_forest_count(int d);

struct RBadOptions {
  std::uint64_t exact_cap = 10'000'000;  // enumerate when total <= cap
  std::uint64_t samples = 100'000;       // sample count past the cap
  std::uint64_t seed = 1;                // sampling RNG seed
  int jobs = 1;                          // workers for the exact sweep
};

struct RBadReport {
  bool exhaustive = true;
  double total = 0.0;           // binomial(ground, a)^d
  std::uint64_t checked = 0;    // tuples examined (= total when exhaustive)
  std::uint64_t bad = 0;        // r-bad among the checked tuples
  double bad_estimate = 0.0;    // bad count (exact) or extrapolation (sampled)
  double std_error = 0.0;       // sampling standard error on bad_estimate
  double bound = 0.0;           // forests(d) * (a^2/ground)^(d-r+1) * total
  bool within_bound = true;
};

// Counts r-bad d-tuples of a-element subsets of [0, ground_size) and compares
// with the forest union bound. Exhaustive (and parallelizable) while the
// tuple count stays within exact_cap; beyond that it degrades to seeded
// uniform sampling and flags the report as non-exhaustive. Requires
// 1 <= r <= d and 1 <= a <= ground_size.
RBadReport count_r_bad(int ground_size, int a, int d, int r, const RBadOptions& opts = {},
                       BudgetCounter* budget = nullptr);

// ---------------------------------------------------------------------------
// Uniform hypergraphs and independent sets.

struct Hypergraph {
  int n = 0;  // vertices [0, n)
  int s = 0;  // edge size
  std::vector<SubsetMask> edges;  // sorted ascending, no duplicates

  bool operator==(const Hypergraph&) const = default;
};

// Validates edge sizes and ground bounds, sorts and deduplicates.
Hypergraph make_hypergraph(int n, int s, std::vector<SubsetMask> edges);

// First (in ascending mask order) set of l vertices containing no edge, or
// nullopt when none exists. Exact search; requires n <= 20.
std::optional<SubsetMask> turan_independent(const Hypergraph& h, int l,
                                            BudgetCounter* budget = nullptr);

// Edge-count threshold below which an s-uniform hypergraph on n vertices is
// guaranteed an independent set of size l:
//   binomial(l-1, s-1)^-1 * (n-l+1)/(n-s+1) * binomial(n, s).
// Requires 1 <= s <= l <= n.
double turan_threshold(int n, int s, int l);

// Minimum number of graph edges on n vertices leaving no independent set of
// size l (every l-subset of vertices contains an edge), by exact cover
// search. Together with turan_independent this decides the threshold claim
// for ALL graphs at once: no graph below the threshold misses an l-set iff
// this minimum is >= the threshold. Requires l >= 2; returns 0 when l > n.
std::uint64_t min_edges_blocking_independent(int n, int l, BudgetCounter* budget = nullptr);

struct LocalGlobalReport {
  bool hypothesis_holds = false;     // every s-subset contains an independent t-subset
  SubsetMask failing_subset = 0;     // first s-subset with no independent t-subset
  std::optional<SubsetMask> independent;  // an independent set of size n-s+1
};

// Local-to-global independence transfer on a graph (2-uniform hypergraph):
// verifies the hypothesis by scanning all s-subsets, then searches exactly
// for an independent set of size n-s+1. The conclusion is reported, never
// asserted: outside the range of local_global_range_ok the transfer can fail
// on hypothesis-satisfying graphs (the 5-cycle at s=3, t=2). Requires
// 0 < t < s <= n and n <= 18.
LocalGlobalReport local_to_global_independent(const Hypergraph& g, int s, int t,
                                              BudgetCounter* budget = nullptr);

// Parameter range on which the transfer lemma is sound (t < s <= 2t - 3);
// the source states the upper limit with a typo that would make it empty.
inline bool local_global_range_ok(int s, int t) { return t < s && s <= 2 * t - 3; }

// ---------------------------------------------------------------------------
// Disjoint subsets inside a single nerve family.

struct DisjointSubsets {
  UpFamily family;                  // over the local ground [0, |P'|)
  std::vector<SubsetMask> subsets;  // 2^t pairwise disjoint global masks
  int containing_point = -1;        // ground point in the hull of every member
};

// Doubling recursion on a set P' of exactly r2^t points (r2 = the attained
// second Radon number): split P' into r2 equal blocks, recurse to get per-
// block families with 2^(t-1) disjoint subsets each, merge the r2 families
// with n5_witness at t = 2, and lift the subsets by unioning them across each
// witness group. The result is one nerve family containing 2^t pairwise
// disjoint subsets of P', re-validated before returning. Throws
// std::invalid_argument when r2 is not attained or |P'| != r2^t, and
// propagates property_violation from n5_witness.
DisjointSubsets jamison_disjoint_subsets(const ConvexitySpace& space, SubsetMask pprime, int t,
                                         BudgetCounter* budget = nullptr);

struct KDisjointCommon {
  std::vector<SubsetMask> parts;  // k pairwise disjoint non-empty global masks
                                  // covering P (ordered by smallest element)
  UpFamily family;                // over the local ground [0, |P|); contains
                                  // every part
  int containing_point = -1;      // ground point in the hull of every member
};

// Searches for k pairwise disjoint subsets of P lying in one nerve family,
// certifying the family through the same merge step a general lower-bound
// argument uses: common families are found directly for every min(k, 2*r2-3)
// parts, then families of larger part-collections are built by merging r2
// smaller ones with n5_witness (t = 2). Candidates are the partitions of P
// into k parts in restricted-growth order; the first certifiable one is
// returned, and success certifies r_k <= |P| for this space. Returns nullopt
// when no candidate certifies. Requires |P| <= 12 and an attained r2 (for
// k >= 2).
std::optional<KDisjointCommon> find_k_disjoint_common(const ConvexitySpace& space, SubsetMask pts,
                                                      int k, BudgetCounter* budget = nullptr);

// ---------------------------------------------------------------------------
// Line-oriented text formats.
//
// TupleFamily:  header "d r ground_size", then one tuple per line: d
// coordinate groups separated by '|', each group the coordinate's sorted
// indices separated by spaces ("-" for an empty coordinate when r = 0).
// Hypergraph:   header "n s", then one edge per line as s sorted indices.
// Blank lines and lines starting with '#' are ignored.

std::string tuple_family_to_text(const TupleFamily& f);
TupleFamily tuple_family_from_text(const std::string& text);
TupleFamily tuple_family_from_stream(std::istream& in);

std::string hypergraph_to_text(const Hypergraph& h);
Hypergraph hypergraph_from_text(const std::string& text);
Hypergraph hypergraph_from_stream(std::istream& in);

}  // namespace cvx
