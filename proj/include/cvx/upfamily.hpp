#pragma once

// Upward-closed families of subsets of a small ground set [0, m), in two
// representations: the antichain of minimal members (compact, any m <= 63)
// and a dense bitvector over all 2^m subsets (fast set algebra, m <= 13).

#include <cstdint>
#include <vector>

#include "cvx/mask.hpp"

namespace cvx {

struct UpFamily {
  int ground_size = 0;
  std::vector<SubsetMask> min_sets;  // antichain, sorted ascending

  bool operator==(const UpFamily&) const = default;
};

// Inclusion-minimal elements of an arbitrary list, sorted.
std::vector<SubsetMask> minimal_elements(std::vector<SubsetMask> sets);

// The up-closure of `sets` inside 2^[ground_size], as its minimal antichain.
UpFamily up_closure(std::vector<SubsetMask> sets, int ground_size);

inline bool family_member(const UpFamily& f, SubsetMask s) {
  for (SubsetMask m : f.min_sets)
    if (subset_of(m, s)) return true;
  return false;
}

// f ⊆ g as families of sets.
inline bool family_includes(const UpFamily& g, const UpFamily& f) {
  for (SubsetMask m : f.min_sets)
    if (!family_member(g, m)) return false;
  return true;
}

UpFamily family_intersect(const UpFamily& a, const UpFamily& b);
UpFamily family_union(const UpFamily& a, const UpFamily& b);

// Canonical total order (by minimal antichain, lexicographically).
inline bool family_less(const UpFamily& a, const UpFamily& b) { return a.min_sets < b.min_sets; }

// Image of the family under a relabeling of the ground set; perm[i] is the
// new name of point i.
UpFamily family_relabel(const UpFamily& f, const std::vector<int>& perm);

// ---------------------------------------------------------------------------

inline constexpr int kMaxDenseGround = 13;  // 2^13 bits per family

struct FamilyBits {
  int m = 0;
  std::vector<std::uint64_t> words;  // bit s <=> subset with mask s is a member

  bool get(SubsetMask s) const { return (words[s >> 6] >> (s & 63)) & 1; }
  void set(SubsetMask s) { words[s >> 6] |= std::uint64_t{1} << (s & 63); }
};

inline FamilyBits make_empty_bits(int m) {
  return FamilyBits{m, std::vector<std::uint64_t>(m <= 6 ? 1 : std::size_t{1} << (m - 6), 0)};
}

FamilyBits bits_of_family(const UpFamily& f);
UpFamily family_of_bits(const FamilyBits& b);

bool bits_subset(const FamilyBits& a, const FamilyBits& b);  // a ⊆ b
void bits_and(const FamilyBits& a, const FamilyBits& b, FamilyBits& out);
void bits_or(const FamilyBits& a, const FamilyBits& b, FamilyBits& out);
inline bool bits_empty_member(const FamilyBits& b) { return b.words[0] & 1; }

// Small-member profiles: which singletons / pairs are members. The pair
// profile packs {i,j} (i<j) at index i*(2m-i-1)/2 + (j-i-1) and therefore
// needs C(m,2) <= 64, i.e. m <= 11.
inline int pair_index(int i, int j, int m) { return i * (2 * m - i - 1) / 2 + (j - i - 1); }

std::uint64_t extract_singles(const FamilyBits& b);
std::uint64_t extract_pairs(const FamilyBits& b);

}  // namespace cvx
