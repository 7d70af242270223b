#pragma once

// Construction and exhaustive verification of a nerve over 3(k-1)+1 points
// whose associated convexity space has second Radon number exactly 4 yet
// contains no k pairwise disjoint member sets in any single family.  Radon
// recurrences then force the k-th Radon number of that space to be at least
// 3(k-1)+2, one more than the value 3(k-1)+1 predicted by iterating the
// second Radon number.
//
// The nerve's maximal families come in three kinds over the ground P:
//   A[x]       = up( {x}   and every 4-subset of P )
//   B[xy:zw]   = up( {x,y}, {z,w} (all four distinct), every 3-subset
//                    meeting {x,y,z,w}, and every 4-subset of P )
//   C[xy]      = up( {x,y} and every 3-subset of P )
// All three are generated here from those definitions and minimized
// generically; no minimal-set lists are hard-coded.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvx/budget.hpp"
#include "cvx/nerve.hpp"
#include "cvx/upfamily.hpp"

namespace cvx {

enum class CexKind { A, B, C };

// Canonical parameters: A uses params[0]; C uses params[0] < params[1];
// B uses two internally sorted, lexicographically ordered disjoint pairs
// (params[0] < params[1], params[2] < params[3], pair 01 < pair 23).
struct CexFamilyId {
  CexKind kind = CexKind::A;
  std::array<int, 4> params = {-1, -1, -1, -1};
  bool operator==(const CexFamilyId&) const = default;
};

// Display form: "A[3]", "B[0 1 : 2 3]", "C[0 1]".
std::string cex_id_name(const CexFamilyId& id);

struct Counterexample {
  int k = 0;
  Nerve nerve;                   // maximal families in canonical order
  std::vector<CexFamilyId> ids;  // ids[i] names nerve.maximal_families[i]
  std::size_t a_count = 0, b_count = 0, c_count = 0;
};

// Builds the nerve for a given k >= 3.  Ground size 3(k-1)+1 must stay
// within the dense-family limit (throws budget_error beyond it, and
// std::invalid_argument for k < 3).
Counterexample build_counterexample(int k);

// Members of size exactly 2, ascending.  This "pair trace" is what the
// containment analysis below keys on: it intersects and unions
// homomorphically, e.g. pair_members(F1 meet F2) is the intersection of the
// two traces.
std::vector<SubsetMask> pair_members(const UpFamily& f);

// Containment index specialized to the three family kinds.  For a query
// family U it derives the full list of possible maximal supersets from U's
// singleton and pair members alone:
//   - a member {x} forces A[x];  two distinct singleton members rule out all;
//   - with no singletons, every candidate must hold U's pair trace, which
//     pins down at most A[x] / C[xy] / the B families through one pair;
//   - three or more pairs need a common point x (then only A[x] can work).
// Each candidate is then checked by a full dense-bitset inclusion, so the
// index is exact for arbitrary queries, not only ones arising from this
// nerve.  Requires ground size <= 11 so pair traces fit one word.
class KindIndex : public ContainmentIndex {
 public:
  KindIndex(const Counterexample& cex, const std::vector<FamilyRec>& recs);
  bool contains_superset(const FamilyRec& u) const override;

 private:
  bool test(std::size_t rec, const FamilyRec& u) const;

  const std::vector<FamilyRec>* recs_;
  int m_;
  std::vector<std::size_t> a_of_point_;              // x -> rec index
  std::vector<std::size_t> c_of_pair_;               // pair_index -> rec index
  std::vector<std::size_t> b_of_pairs_;              // p1 * 64 + p2 -> rec index
  std::vector<std::vector<std::size_t>> b_with_pair_;  // pair_index -> B recs holding it
  std::vector<SubsetMask> pair_mask_;                // pair_index -> two-bit mask
};

// Second Radon number of the associated space is at most 4: every multiset
// of four maximal families splits into two groups whose intersections union
// to a nerve member.  Exhaustive over all C(#families + 3, 4) multisets;
// with use_symmetry, reduced to multisets containing a family-orbit
// representative under the ground symmetries (transposition + rotation),
// which permute the construction's families among themselves.
N5Result verify_r2_upper(const Counterexample& cex, bool use_symmetry = false,
                         int jobs = 1, BudgetCounter* budget = nullptr);

// Second Radon number is at least 4: first (lexicographic) triple of
// distinct maximal families such that all three bipartitions produce a
// union-of-intersections lying in no maximal family.  For this construction
// the scan lands on the triple A[0], A[1], A[2].
std::optional<std::array<std::size_t, 3>> verify_r2_lower(const Counterexample& cex);

// Largest count of pairwise disjoint member sets over all maximal families.
// The construction needs this to stay below k.
int verify_no_k_disjoint(const Nerve& nv);

// Independent space-level check of "second Radon number = 4", run on the
// associated space itself (one point per family closed under pointwise
// intersection plus one per ground point) using its closed-form hulls: every
// 4-subset of points must admit a two-part split with intersecting group
// hulls, and the lower-bound triple must admit none.  The point count (140
// for k = 3) exceeds the bitmask solver's ground limit, which is why this
// scan exists.
struct SpaceR2Crosscheck {
  bool upper_ok = false;
  std::array<std::size_t, 3> lower_triple = {0, 0, 0};  // point indices
  bool lower_ok = false;
  std::uint64_t quadruples_checked = 0;
  int point_count = 0;
};
SpaceR2Crosscheck crosscheck_space_r2(const Counterexample& cex, int jobs = 1,
                                      BudgetCounter* budget = nullptr);

struct CexOptions {
  bool use_symmetry = false;
  bool space_crosscheck = false;
  int jobs = 1;
  BudgetCounter* budget = nullptr;
};

struct CexReport {
  int k = 0;
  int ground_size = 0;
  std::size_t a_count = 0, b_count = 0, c_count = 0, total = 0;
  N5Result n5;             // the r=4, t=2 partition-property run
  bool used_symmetry = false;
  bool r2_upper_ok = false;
  std::optional<std::array<std::size_t, 3>> r2_lower_triple;
  std::vector<CexFamilyId> r2_lower_ids;  // names for the triple, when found
  int packing_max = 0;
  bool no_k_disjoint = false;
  int iterated_bound = 0;  // 3(k-1)+1, the value recurrence iteration predicts
  int certified_lower = 0; // 3(k-1)+2, forced once the three checks hold
  bool verified = false;   // conjunction of the three checks
  std::optional<SpaceR2Crosscheck> crosscheck;
  double elapsed_seconds = 0.0;  // wall clock; never serialized (see below)
};

// Runs build + the three verifications (+ optional space crosscheck) and
// assembles the report.
CexReport counterexample_report(int k, const CexOptions& opts = {});

// Deterministic JSON rendering of the report.  Timing stays out of the
// document so identical inputs give identical bytes.
std::string cex_report_json(const CexReport& rep);

}  // namespace cvx
