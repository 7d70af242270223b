#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "cvx/upfamily.hpp"
#include "doctest.h"

using namespace cvx;

namespace {

// Definitional up-closure: every superset of a generator, as an explicit set.
std::set<SubsetMask> up_oracle(const std::vector<SubsetMask>& gens, int m) {
  std::set<SubsetMask> out;
  for (SubsetMask s = 0; s <= full_mask(m); ++s)
    for (SubsetMask g : gens)
      if (subset_of(g, s)) {
        out.insert(s);
        break;
      }
  return out;
}

std::vector<SubsetMask> random_gens(std::mt19937_64& rng, int m, int count) {
  std::vector<SubsetMask> gens;
  for (int i = 0; i < count; ++i)
    gens.push_back(rng() & full_mask(m));
  return gens;
}

}  // namespace

TEST_CASE("up-closure membership and minimal antichain match the oracle") {
  std::mt19937_64 rng(7101);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 1 + static_cast<int>(rng() % 8);
    auto gens = random_gens(rng, m, 1 + static_cast<int>(rng() % 6));
    auto members = up_oracle(gens, m);
    UpFamily f = up_closure(gens, m);

    for (SubsetMask s = 0; s <= full_mask(m); ++s)
      CHECK(family_member(f, s) == (members.count(s) > 0));

    // Minimal members, computed definitionally.
    std::vector<SubsetMask> naive;
    for (SubsetMask s : members) {
      bool minimal = true;
      for (SubsetMask t : members)
        if (t != s && subset_of(t, s)) minimal = false;
      if (minimal) naive.push_back(s);
    }
    std::sort(naive.begin(), naive.end());
    CHECK(f.min_sets == naive);
    CHECK(std::is_sorted(f.min_sets.begin(), f.min_sets.end()));
  }
}

TEST_CASE("family intersection and union agree with pointwise set operations") {
  std::mt19937_64 rng(7102);
  for (int trial = 0; trial < 150; ++trial) {
    int m = 1 + static_cast<int>(rng() % 7);
    UpFamily a = up_closure(random_gens(rng, m, 1 + static_cast<int>(rng() % 5)), m);
    UpFamily b = up_closure(random_gens(rng, m, 1 + static_cast<int>(rng() % 5)), m);
    UpFamily both = family_intersect(a, b);
    UpFamily either = family_union(a, b);
    for (SubsetMask s = 0; s <= full_mask(m); ++s) {
      bool ina = family_member(a, s), inb = family_member(b, s);
      CHECK(family_member(both, s) == (ina && inb));
      CHECK(family_member(either, s) == (ina || inb));
    }
    // includes() is the pointwise containment of membership sets.
    bool a_in_b = true;
    for (SubsetMask s = 0; s <= full_mask(m); ++s)
      if (family_member(a, s) && !family_member(b, s)) a_in_b = false;
    CHECK(family_includes(b, a) == a_in_b);
    CHECK(family_includes(either, a));
    CHECK(family_includes(a, both));
  }
}

TEST_CASE("named antichain identities") {
  // up({{0,1},{2}}) ∩ up({{1}}) has minimal members {0,1} and {1,2}.
  UpFamily a = up_closure({0b011, 0b100}, 3);
  UpFamily b = up_closure({0b010}, 3);
  CHECK(family_intersect(a, b).min_sets == std::vector<SubsetMask>{0b011, 0b110});
  // Absorbing generators: {0} swallows {0,1}.
  CHECK(up_closure({0b01, 0b11}, 2).min_sets == std::vector<SubsetMask>{0b01});
  // The empty set as generator makes the family everything.
  UpFamily all = up_closure({0}, 4);
  CHECK(all.min_sets == std::vector<SubsetMask>{0});
  for (SubsetMask s = 0; s <= full_mask(4); ++s) CHECK(family_member(all, s));
  // No generators: the empty family.
  UpFamily none = up_closure({}, 4);
  CHECK(none.min_sets.empty());
  CHECK_FALSE(family_member(none, full_mask(4)));
  CHECK(family_includes(all, none));
  CHECK_FALSE(family_includes(none, all));
  CHECK_THROWS_AS(up_closure({bit(5)}, 3), std::invalid_argument);
}

TEST_CASE("relabeling permutes members and preserves the antichain") {
  UpFamily f = up_closure({0b0011, 0b1100, 0b0110}, 4);
  std::vector<int> perm = {2, 0, 3, 1};  // i -> perm[i]
  UpFamily g = family_relabel(f, perm);
  for (SubsetMask s = 0; s <= full_mask(4); ++s) {
    SubsetMask image = 0;
    for (int i : mask_indices(s)) image |= bit(perm[i]);
    CHECK(family_member(g, image) == family_member(f, s));
  }
  // Round trip through the inverse permutation.
  std::vector<int> inv(4);
  for (int i = 0; i < 4; ++i) inv[perm[i]] = i;
  CHECK(family_relabel(g, inv) == f);
}

TEST_CASE("dense bitvector form round-trips and mirrors set algebra") {
  std::mt19937_64 rng(7103);
  for (int trial = 0; trial < 150; ++trial) {
    int m = 1 + static_cast<int>(rng() % 9);
    UpFamily a = up_closure(random_gens(rng, m, 1 + static_cast<int>(rng() % 5)), m);
    UpFamily b = up_closure(random_gens(rng, m, 1 + static_cast<int>(rng() % 5)), m);
    FamilyBits ba = bits_of_family(a), bb = bits_of_family(b);
    for (SubsetMask s = 0; s <= full_mask(m); ++s) {
      CHECK(ba.get(s) == family_member(a, s));
    }
    CHECK(family_of_bits(ba) == a);
    CHECK(bits_subset(ba, bb) == family_includes(b, a));

    FamilyBits band, bor;
    bits_and(ba, bb, band);
    bits_or(ba, bb, bor);
    CHECK(family_of_bits(band) == family_intersect(a, b));
    CHECK(family_of_bits(bor) == family_union(a, b));
    CHECK(bits_subset(band, ba));
    CHECK(bits_subset(ba, bor));
    CHECK(bits_empty_member(ba) == family_member(a, 0));
  }
}

TEST_CASE("single and pair profiles read off the dense form") {
  UpFamily f = up_closure({bit(1), bit(0) | bit(2), bit(2) | bit(3)}, 4);
  FamilyBits b = bits_of_family(f);
  CHECK(extract_singles(b) == std::uint64_t{0b0010});
  std::uint64_t pairs = extract_pairs(b);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      bool expect = family_member(f, bit(i) | bit(j));
      CHECK(((pairs >> pair_index(i, j, 4)) & 1) == (expect ? 1 : 0));
    }
  // Profiles are homomorphic under AND/OR of families.
  UpFamily g = up_closure({bit(0), bit(3)}, 4);
  FamilyBits bg = bits_of_family(g), band, bor;
  bits_and(b, bg, band);
  bits_or(b, bg, bor);
  CHECK(extract_singles(band) == (extract_singles(b) & extract_singles(bg)));
  CHECK(extract_singles(bor) == (extract_singles(b) | extract_singles(bg)));
  CHECK(extract_pairs(band) == (extract_pairs(b) & extract_pairs(bg)));
  CHECK(extract_pairs(bor) == (extract_pairs(b) | extract_pairs(bg)));
  // pair_index is a bijection onto [0, C(m,2)).
  std::set<int> seen;
  for (int i = 0; i < 11; ++i)
    for (int j = i + 1; j < 11; ++j) seen.insert(pair_index(i, j, 11));
  CHECK(seen.size() == 55);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 54);
}
