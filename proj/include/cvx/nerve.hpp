#pragma once

// Nerves of point sets in convexity spaces: the family-of-families whose
// members are exactly those collections F of subsets of P with
// ⋂_{S∈F} hull(S) ≠ ∅. A nerve is stored by its maximal families only;
// arbitrary membership is decided against them (the nerve is a downset and
// every member family extends to a maximal one).

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvx/budget.hpp"
#include "cvx/space.hpp"
#include "cvx/upfamily.hpp"

namespace cvx {

// A structural property that should hold by construction was found violated
// (e.g. a family claimed to be a nerve member has empty hull-intersection).
class property_violation : public std::runtime_error {
 public:
  explicit property_violation(const std::string& what) : std::runtime_error(what) {}
};

struct Nerve {
  int ground_size = 0;
  std::vector<UpFamily> maximal_families;  // sorted by family_less, pairwise incomparable

  bool operator==(const Nerve&) const = default;
};

// Is f a member of the nerve, i.e. contained in some maximal family?
bool nerve_member(const Nerve& nv, const UpFamily& f);

// Image of the nerve under a relabeling of its ground set (canonical order
// restored).
Nerve nerve_relabel(const Nerve& nv, const std::vector<int>& perm);

// Maximum subset count for the dense family lattice (2^|P| bits per family).
inline constexpr std::size_t kDefaultLatticeCap = std::size_t{1} << 13;

// Nerve of the points of P inside the space: maximal elements of
// {F_x : x ∈ X}, F_x = {S ⊆ P : x ∈ hull(S)}. Ground indices of the nerve
// are positions of P's points in ascending order.
Nerve compute_nerve(const ConvexitySpace& space, SubsetMask points,
                    std::size_t lattice_cap = kDefaultLatticeCap);

struct NervePropertyReport {
  bool structure_ok = false;       // antichain invariants of the representation
  bool point_families_ok = false;  // every up({{p}}) is a member
  int packing_max = 0;             // largest count of pairwise disjoint member
                                   // sets within a single maximal family
  std::string detail;              // first violation, when any
};

NervePropertyReport check_n_properties(const Nerve& nv);

// Largest number of pairwise disjoint member sets of the family. Disjoint
// members can always be shrunk to disjoint minimal members, so the exact
// search runs over min_sets.
int max_disjoint_members(const UpFamily& f);

// All partitions of [0, r) into exactly t non-empty unordered blocks, each
// partition given as t slot masks ordered by smallest element; enumeration
// is in restricted-growth order, so the list is deterministic.
std::vector<std::vector<std::uint32_t>> slot_partitions(int r, int t);

// ---------------------------------------------------------------------------
// Exhaustive partition property: for every multiset of r maximal families
// there is a partition into t non-empty groups whose union of group-wise
// intersections is again a nerve member.

// One family in dense form plus small-member profiles (bitmask of singleton
// members; bitmask of pair members when C(m,2) <= 64, else 0).
struct FamilyRec {
  FamilyBits bits;
  std::uint64_t singles = 0;
  std::uint64_t pairs = 0;
};

inline void rec_and(const FamilyRec& a, const FamilyRec& b, FamilyRec& out) {
  bits_and(a.bits, b.bits, out.bits);
  out.singles = a.singles & b.singles;
  out.pairs = a.pairs & b.pairs;
}

inline void rec_or(const FamilyRec& a, const FamilyRec& b, FamilyRec& out) {
  bits_or(a.bits, b.bits, out.bits);
  out.singles = a.singles | b.singles;
  out.pairs = a.pairs | b.pairs;
}

std::vector<FamilyRec> build_family_recs(const Nerve& nv);

// Answers "is u contained in some maximal family?" during the enumeration.
class ContainmentIndex {
 public:
  virtual ~ContainmentIndex() = default;
  virtual bool contains_superset(const FamilyRec& u) const = 0;
};

// Baseline index: profile-filtered linear scan over all maximal families.
class ScanIndex : public ContainmentIndex {
 public:
  explicit ScanIndex(const std::vector<FamilyRec>& recs) : recs_(&recs) {}
  bool contains_superset(const FamilyRec& u) const override;

 private:
  const std::vector<FamilyRec>* recs_;
};

struct N5Options {
  int jobs = 1;
  BudgetCounter* budget = nullptr;
  // Custom containment index; a ScanIndex over the nerve is built when null.
  const ContainmentIndex* index = nullptr;
  // Permutation generators of a group on the nerve's ground set under which
  // the nerve is invariant. When present, only multisets containing an orbit
  // representative are enumerated; the verdict extends by equivariance.
  const std::vector<std::vector<int>>* symmetry = nullptr;
};

struct N5Result {
  bool ok = true;
  std::vector<std::size_t> failing;  // sorted family indices, when !ok
  bool failing_has_repeats = false;
  bool distinct_ok = true;  // verdict restricted to repetition-free multisets
  std::uint64_t multisets_checked = 0;
};

// Exhaustive over multisets (the enumeration never stops at a failure, so
// certificates are deterministic for any job count); r >= t >= 2.
N5Result check_n5_abstract(const Nerve& nv, int r, int t, const N5Options& opts = {});

// ---------------------------------------------------------------------------
// Constructive witness for the partition property on an actual space.

struct N5WitnessResult {
  std::vector<std::vector<std::size_t>> groups;  // indices into the input list
  std::vector<int> witness_points;               // q_i per input family
  UpFamily merged;                               // ∪ over groups of ⋂ in group
  int containing_point = -1;                     // merged ⊆ F_{containing_point}
};

// pts: the points of P in the space, in the order matching family grounds.
// Finds a partition of the families into t groups such that the hulls of the
// groups' witness points share a common point, and certifies the merged
// family as a nerve member at that point. Throws property_violation with a
// diagnostic if some family has empty hull-intersection or no partition
// works.
N5WitnessResult n5_witness(const ConvexitySpace& space, const std::vector<int>& pts,
                           const std::vector<UpFamily>& families, int t,
                           BudgetCounter* budget = nullptr);

// ---------------------------------------------------------------------------
// Space construction from a nerve (ground set of families, closed-form hull).

struct ConstructedSpace {
  int base_size = 0;                // |P| of the source nerve
  std::vector<UpFamily> points;     // ground set Y: maximal families first,
                                    // then the novel point families up({{p}})
  std::vector<FamilyBits> bits;     // dense forms, aligned with points
  std::size_t maximal_count = 0;
  std::vector<int> embedding;       // p -> index of up({{p}}) in points
};

ConstructedSpace make_constructed_space(const Nerve& nv);

// hull_Y(A) = {G ∈ Y : ⋂_{H∈A} H ⊆ G}, computed in closed form. Input and
// output are sorted point indices; hull of the empty set is empty.
std::vector<int> constructed_hull(const ConstructedSpace& cs, const std::vector<int>& a);

// Nerve of the embedded copy of P inside the constructed space, with ground
// indices matching the source nerve's (roundtrip comparison is structural
// equality).
Nerve constructed_nerve(const ConstructedSpace& cs);

struct EmbeddedSpace {
  ConvexitySpace space;
  std::vector<int> embedding;  // p -> point index
};

// Materializes the constructed space explicitly: convex sets are the
// intersection closure of all {G : S ∈ G} for S ⊆ P, plus ∅ and Y. Requires
// |Y| <= 63; the closure is capped like intersection_closure.
EmbeddedSpace nerve_to_space(const Nerve& nv, std::size_t closure_cap = kDefaultClosureCap);

// ---------------------------------------------------------------------------

std::string nerve_to_json(const Nerve& nv);
Nerve nerve_from_json(const std::string& text);
Nerve nerve_from_stream(std::istream& in);

}  // namespace cvx
