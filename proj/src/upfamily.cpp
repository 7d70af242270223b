#include "cvx/upfamily.hpp"

#include <algorithm>
#include <stdexcept>

namespace cvx {

std::vector<SubsetMask> minimal_elements(std::vector<SubsetMask> sets) {
  std::sort(sets.begin(), sets.end(), [](SubsetMask a, SubsetMask b) {
    int pa = popcount(a), pb = popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<SubsetMask> minimal;
  for (SubsetMask s : sets) {
    bool dominated = false;
    for (SubsetMask m : minimal) {
      if (subset_of(m, s)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) minimal.push_back(s);
  }
  std::sort(minimal.begin(), minimal.end());
  return minimal;
}

UpFamily up_closure(std::vector<SubsetMask> sets, int ground_size) {
  check_ground(ground_size);
  SubsetMask full = full_mask(ground_size);
  for (SubsetMask s : sets)
    if (!subset_of(s, full)) throw std::invalid_argument("up_closure: set outside ground");
  return UpFamily{ground_size, minimal_elements(std::move(sets))};
}

UpFamily family_intersect(const UpFamily& a, const UpFamily& b) {
  if (a.ground_size != b.ground_size)
    throw std::invalid_argument("family_intersect: ground size mismatch");
  // A set lies in both up-closures iff it contains some m_a and some m_b,
  // i.e. contains m_a | m_b for a pair of minimal members.
  std::vector<SubsetMask> gens;
  gens.reserve(a.min_sets.size() * b.min_sets.size());
  for (SubsetMask x : a.min_sets)
    for (SubsetMask y : b.min_sets) gens.push_back(x | y);
  return UpFamily{a.ground_size, minimal_elements(std::move(gens))};
}

UpFamily family_union(const UpFamily& a, const UpFamily& b) {
  if (a.ground_size != b.ground_size)
    throw std::invalid_argument("family_union: ground size mismatch");
  std::vector<SubsetMask> gens = a.min_sets;
  gens.insert(gens.end(), b.min_sets.begin(), b.min_sets.end());
  return UpFamily{a.ground_size, minimal_elements(std::move(gens))};
}

UpFamily family_relabel(const UpFamily& f, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != f.ground_size)
    throw std::invalid_argument("family_relabel: permutation size mismatch");
  std::vector<SubsetMask> out;
  out.reserve(f.min_sets.size());
  for (SubsetMask s : f.min_sets) {
    SubsetMask t = 0;
    for (int i : mask_indices(s)) t |= bit(perm[i]);
    out.push_back(t);
  }
  // A bijective relabeling preserves inclusions, so the image is already an
  // antichain; re-sorting restores the canonical order.
  std::sort(out.begin(), out.end());
  return UpFamily{f.ground_size, std::move(out)};
}

// ---------------------------------------------------------------------------

FamilyBits bits_of_family(const UpFamily& f) {
  if (f.ground_size > kMaxDenseGround)
    throw std::invalid_argument("bits_of_family: ground too large for dense form");
  FamilyBits b = make_empty_bits(f.ground_size);
  SubsetMask full = full_mask(f.ground_size);
  for (SubsetMask s = 0; s <= full; ++s)
    if (family_member(f, s)) b.set(s);
  return b;
}

UpFamily family_of_bits(const FamilyBits& b) {
  // A member is minimal iff dropping any single element leaves the family.
  std::vector<SubsetMask> mins;
  SubsetMask full = full_mask(b.m);
  for (SubsetMask s = 0; s <= full; ++s) {
    if (!b.get(s)) continue;
    bool minimal = true;
    for (SubsetMask rest = s; rest;) {
      SubsetMask low = rest & (~rest + 1);
      if (b.get(s ^ low)) {
        minimal = false;
        break;
      }
      rest ^= low;
    }
    if (minimal) mins.push_back(s);
  }
  return UpFamily{b.m, std::move(mins)};
}

bool bits_subset(const FamilyBits& a, const FamilyBits& b) {
  for (std::size_t i = 0; i < a.words.size(); ++i)
    if (a.words[i] & ~b.words[i]) return false;
  return true;
}

void bits_and(const FamilyBits& a, const FamilyBits& b, FamilyBits& out) {
  out.m = a.m;
  out.words.resize(a.words.size());
  for (std::size_t i = 0; i < a.words.size(); ++i) out.words[i] = a.words[i] & b.words[i];
}

void bits_or(const FamilyBits& a, const FamilyBits& b, FamilyBits& out) {
  out.m = a.m;
  out.words.resize(a.words.size());
  for (std::size_t i = 0; i < a.words.size(); ++i) out.words[i] = a.words[i] | b.words[i];
}

std::uint64_t extract_singles(const FamilyBits& b) {
  std::uint64_t singles = 0;
  for (int p = 0; p < b.m; ++p)
    if (b.get(bit(p))) singles |= std::uint64_t{1} << p;
  return singles;
}

std::uint64_t extract_pairs(const FamilyBits& b) {
  if (binomial(b.m, 2) > 64) throw std::invalid_argument("extract_pairs: too many pairs");
  std::uint64_t pairs = 0;
  for (int i = 0; i < b.m; ++i)
    for (int j = i + 1; j < b.m; ++j)
      if (b.get(bit(i) | bit(j))) pairs |= std::uint64_t{1} << pair_index(i, j, b.m);
  return pairs;
}

}  // namespace cvx
