#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "cvx/cex.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cvx;

namespace {

// Definitional membership for each family kind, straight from the
// construction's description and independent of the generic up-closure
// machinery that build_counterexample runs.
bool member_oracle(const CexFamilyId& id, SubsetMask s) {
  int size = popcount(s);
  switch (id.kind) {
    case CexKind::A:
      return has_bit(s, id.params[0]) || size >= 4;
    case CexKind::B: {
      SubsetMask xy = bit(id.params[0]) | bit(id.params[1]);
      SubsetMask zw = bit(id.params[2]) | bit(id.params[3]);
      return subset_of(xy, s) || subset_of(zw, s) || (size >= 3 && (s & (xy | zw)) != 0) ||
             size >= 4;
    }
    case CexKind::C:
      return subset_of(bit(id.params[0]) | bit(id.params[1]), s) || size >= 3;
  }
  return false;
}

std::size_t index_of_a(const Counterexample& cex, int x) {
  for (std::size_t i = 0; i < cex.ids.size(); ++i)
    if (cex.ids[i].kind == CexKind::A && cex.ids[i].params[0] == x) return i;
  REQUIRE(false);
  return 0;
}

// Union of one family with the meet of two others, the shape every
// bipartition of a triple produces.
FamilyRec solo_vs_pair(const std::vector<FamilyRec>& recs, std::size_t solo, std::size_t g1,
                       std::size_t g2, int m) {
  FamilyRec meet{make_empty_bits(m), 0, 0}, u{make_empty_bits(m), 0, 0};
  rec_and(recs[g1], recs[g2], meet);
  rec_or(recs[solo], meet, u);
  return u;
}

}  // namespace

TEST_CASE("construction sizes and structure for k = 3") {
  Counterexample cex = build_counterexample(3);
  CHECK(cex.nerve.ground_size == 7);
  CHECK(cex.a_count == 7);
  CHECK(cex.b_count == 105);
  CHECK(cex.c_count == 21);
  CHECK(cex.nerve.maximal_families.size() == 133);
  CHECK(cex.ids.size() == 133);

  NervePropertyReport rep = check_n_properties(cex.nerve);
  INFO(rep.detail);
  CHECK(rep.structure_ok);
  CHECK(rep.point_families_ok);
  CHECK(rep.packing_max == 2);
}

TEST_CASE("construction sizes and structure for k = 4") {
  Counterexample cex = build_counterexample(4);
  CHECK(cex.nerve.ground_size == 10);
  CHECK(cex.a_count == 10);
  CHECK(cex.b_count == 630);
  CHECK(cex.c_count == 45);
  CHECK(cex.nerve.maximal_families.size() == 685);

  NervePropertyReport rep = check_n_properties(cex.nerve);
  INFO(rep.detail);
  CHECK(rep.structure_ok);
  CHECK(rep.point_families_ok);
  CHECK(rep.packing_max == 3);
  CHECK(verify_no_k_disjoint(cex.nerve) == 3);  // < k = 4
}

TEST_CASE("k out of range") {
  CHECK_THROWS_AS(build_counterexample(2), std::invalid_argument);
  CHECK_THROWS_AS(build_counterexample(0), std::invalid_argument);
  CHECK_THROWS_AS(build_counterexample(6), budget_error);  // ground 16 > dense limit
}

TEST_CASE("every family matches its id's definitional membership") {
  Counterexample cex = build_counterexample(3);
  const int m = cex.nerve.ground_size;
  for (std::size_t i = 0; i < cex.ids.size(); ++i) {
    FamilyBits bits = bits_of_family(cex.nerve.maximal_families[i]);
    for (SubsetMask s = 0; s < (SubsetMask{1} << m); ++s) {
      if (bits.get(s) != member_oracle(cex.ids[i], s)) {
        CAPTURE(cex_id_name(cex.ids[i]));
        CAPTURE(s);
        REQUIRE(bits.get(s) == member_oracle(cex.ids[i], s));
      }
    }
  }
}

TEST_CASE("minimal antichain sizes per kind for k = 3") {
  Counterexample cex = build_counterexample(3);
  // A[x]: {x} and the 4-sets avoiding x               -> 1 + C(6,4)  = 16
  // B:    both pairs, then the 3-sets that meet the quad without containing
  //       either pair; every 4-set meets the quad on 7 points         = 26
  // C:    the pair and the 3-sets not containing it   -> 1 + C(7,3)-5 = 31
  for (std::size_t i = 0; i < cex.ids.size(); ++i) {
    std::size_t expect = 0;
    switch (cex.ids[i].kind) {
      case CexKind::A: expect = 16; break;
      case CexKind::B: expect = 26; break;
      case CexKind::C: expect = 31; break;
    }
    CAPTURE(cex_id_name(cex.ids[i]));
    CHECK(cex.nerve.maximal_families[i].min_sets.size() == expect);
  }
}

TEST_CASE("pair traces per kind and their meet homomorphism") {
  Counterexample cex = build_counterexample(3);
  const int m = cex.nerve.ground_size;
  for (std::size_t i = 0; i < cex.ids.size(); ++i) {
    const CexFamilyId& id = cex.ids[i];
    std::vector<SubsetMask> expect;
    switch (id.kind) {
      case CexKind::A:
        for (int y = 0; y < m; ++y)
          if (y != id.params[0]) expect.push_back(bit(id.params[0]) | bit(y));
        break;
      case CexKind::B:
        expect = {bit(id.params[0]) | bit(id.params[1]), bit(id.params[2]) | bit(id.params[3])};
        break;
      case CexKind::C:
        expect = {bit(id.params[0]) | bit(id.params[1])};
        break;
    }
    std::sort(expect.begin(), expect.end());
    CAPTURE(cex_id_name(id));
    CHECK(pair_members(cex.nerve.maximal_families[i]) == expect);
  }

  // The pair trace of a meet is the intersection of the traces.
  std::vector<FamilyRec> recs = build_family_recs(cex.nerve);
  std::mt19937 rng(411);
  std::uniform_int_distribution<std::size_t> pick(0, recs.size() - 1);
  FamilyRec meet{make_empty_bits(m), 0, 0};
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t i = pick(rng), j = pick(rng);
    rec_and(recs[i], recs[j], meet);
    CHECK(extract_pairs(meet.bits) == (recs[i].pairs & recs[j].pairs));
    CHECK(extract_singles(meet.bits) == (recs[i].singles & recs[j].singles));
  }
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t i = pick(rng), j = pick(rng);
    UpFamily f = family_intersect(cex.nerve.maximal_families[i], cex.nerve.maximal_families[j]);
    std::vector<SubsetMask> pi = pair_members(cex.nerve.maximal_families[i]);
    std::vector<SubsetMask> pj = pair_members(cex.nerve.maximal_families[j]);
    std::vector<SubsetMask> both;
    std::set_intersection(pi.begin(), pi.end(), pj.begin(), pj.end(), std::back_inserter(both));
    CHECK(pair_members(f) == both);
  }
}

TEST_CASE("kind index agrees with the scan index") {
  Counterexample cex = build_counterexample(3);
  const int m = cex.nerve.ground_size;
  std::vector<FamilyRec> recs = build_family_recs(cex.nerve);
  KindIndex kind(cex, recs);
  ScanIndex scan(recs);

  auto rec_of = [&](const UpFamily& f) {
    FamilyRec r;
    r.bits = bits_of_family(f);
    r.singles = extract_singles(r.bits);
    r.pairs = extract_pairs(r.bits);
    return r;
  };
  auto agree = [&](const FamilyRec& u) {
    bool a = kind.contains_superset(u), b = scan.contains_superset(u);
    CHECK(a == b);
    return a;
  };

  SUBCASE("all pairwise meets") {
    FamilyRec meet{make_empty_bits(m), 0, 0};
    for (std::size_t i = 0; i < recs.size(); ++i)
      for (std::size_t j = i; j < recs.size(); ++j) {
        rec_and(recs[i], recs[j], meet);
        agree(meet);
      }
  }

  SUBCASE("random unions of meets") {
    std::mt19937 rng(412);
    std::uniform_int_distribution<std::size_t> pick(0, recs.size() - 1);
    FamilyRec m1{make_empty_bits(m), 0, 0}, m2{make_empty_bits(m), 0, 0},
        u{make_empty_bits(m), 0, 0};
    for (int trial = 0; trial < 2000; ++trial) {
      rec_and(recs[pick(rng)], recs[pick(rng)], m1);
      rec_and(recs[pick(rng)], recs[pick(rng)], m2);
      rec_or(m1, m2, u);
      agree(u);
    }
  }

  SUBCASE("random up-families as queries") {
    std::mt19937 rng(413);
    std::uniform_int_distribution<int> ngens(1, 6), size(1, 5);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<SubsetMask> gens;
      for (int g = ngens(rng); g-- > 0;) {
        SubsetMask s = 0;
        for (int b = size(rng); b-- > 0;)
          s |= bit(std::uniform_int_distribution<int>(0, m - 1)(rng));
        gens.push_back(s);
      }
      agree(rec_of(up_closure(gens, m)));
    }
  }

  SUBCASE("hand-picked shapes") {
    CHECK(agree(rec_of(up_closure({bit(3)}, m))));                       // inside A[3]
    CHECK_FALSE(agree(rec_of(up_closure({bit(0), bit(5)}, m))));         // two singletons
    CHECK(agree(rec_of(up_closure({bit(2) | bit(6)}, m))));              // inside C[26]
    CHECK(agree(rec_of(up_closure({bit(0) | bit(1), bit(2) | bit(3)}, m))));  // inside B
    CHECK(agree(rec_of(up_closure({bit(0) | bit(1), bit(0) | bit(2)}, m))));  // star at 0
    // A pair triangle has no common point and fits no kind.
    CHECK_FALSE(
        agree(rec_of(up_closure({bit(0) | bit(1), bit(0) | bit(2), bit(1) | bit(2)}, m))));
    // The whole power set includes the empty set; nothing contains it.
    CHECK_FALSE(agree(rec_of(up_closure({SubsetMask{0}}, m))));
    // Empty family is a subset of everything.
    CHECK(agree(rec_of(UpFamily{m, {}})));
  }
}

TEST_CASE("lower bound: the first irreducible triple is A[0], A[1], A[2]") {
  Counterexample cex = build_counterexample(3);
  const int m = cex.nerve.ground_size;
  auto triple = verify_r2_lower(cex);
  REQUIRE(triple.has_value());
  CHECK((*triple)[0] == index_of_a(cex, 0));
  CHECK((*triple)[1] == index_of_a(cex, 1));
  CHECK((*triple)[2] == index_of_a(cex, 2));
  for (int t = 0; t < 3; ++t) {
    CHECK(cex.ids[(*triple)[t]].kind == CexKind::A);
    CHECK(cex.ids[(*triple)[t]].params[0] == t);
  }

  // Re-verify the three bipartitions against the plain scan index, and pin
  // down why they fail: each union holds a singleton {x} plus a pair
  // avoiding x, a combination no single kind accommodates.
  std::vector<FamilyRec> recs = build_family_recs(cex.nerve);
  ScanIndex scan(recs);
  auto [i, j, l] = *triple;
  for (auto [solo, g1, g2] : {std::array<std::size_t, 3>{i, j, l},
                              std::array<std::size_t, 3>{j, i, l},
                              std::array<std::size_t, 3>{l, i, j}}) {
    FamilyRec u = solo_vs_pair(recs, solo, g1, g2, m);
    CHECK_FALSE(scan.contains_superset(u));
    int x = cex.ids[solo].params[0];
    CHECK((extract_singles(u.bits) & bit(x)) != 0);
    SubsetMask other = full_mask(3) & ~bit(x);  // the two remaining low points
    CHECK(u.bits.get(other));
  }

  // The same triple is the first failing multiset of the r=3, t=2 partition
  // property: repeated families always split successfully at t=2, so the
  // enumeration's earliest failure is exactly this distinct triple.
  N5Result n5 = check_n5_abstract(cex.nerve, 3, 2, {.jobs = 4});
  CHECK_FALSE(n5.ok);
  CHECK_FALSE(n5.distinct_ok);
  CHECK_FALSE(n5.failing_has_repeats);
  CHECK(n5.failing == std::vector<std::size_t>{i, j, l});
  CHECK(n5.multisets_checked == binomial(135, 3));  // C(133+2, 3), exhaustive
}

TEST_CASE("four distinct A families always split across a B family") {
  Counterexample cex = build_counterexample(3);
  const int m = cex.nerve.ground_size;
  std::vector<FamilyRec> recs = build_family_recs(cex.nerve);
  KindIndex kind(cex, recs);
  FamilyRec m1{make_empty_bits(m), 0, 0}, m2{make_empty_bits(m), 0, 0},
      u{make_empty_bits(m), 0, 0};
  // Pairing {x,y} against {z,w} puts the union inside B[xy:zw].
  for (auto [x, y, z, w] : {std::array<int, 4>{0, 1, 2, 3}, std::array<int, 4>{2, 5, 3, 6},
                            std::array<int, 4>{0, 4, 1, 6}}) {
    rec_and(recs[index_of_a(cex, x)], recs[index_of_a(cex, y)], m1);
    rec_and(recs[index_of_a(cex, z)], recs[index_of_a(cex, w)], m2);
    rec_or(m1, m2, u);
    std::size_t b = 0;
    for (std::size_t i = 0; i < cex.ids.size(); ++i) {
      auto [bx, by] = std::minmax(x, y);
      auto [bz, bw] = std::minmax(z, w);
      std::array<int, 4> want = {bx, by, bz, bw};
      if (std::array<int, 4>{bz, bw, bx, by} < want) want = {bz, bw, bx, by};
      if (cex.ids[i].kind == CexKind::B && cex.ids[i].params == want) b = i;
    }
    CHECK(bits_subset(u.bits, recs[b].bits));
    CHECK(kind.contains_superset(u));
  }

  // And a meet with empty pair trace has only size->=3 members, so it sits
  // inside every C family.
  rec_and(recs[index_of_a(cex, 0)], recs[index_of_a(cex, 1)], m1);
  rec_and(m1, recs[index_of_a(cex, 2)], m2);  // three-way meet: trace empties
  CHECK(extract_pairs(m2.bits) == 0);
  for (std::size_t i = 0; i < cex.ids.size(); ++i)
    if (cex.ids[i].kind == CexKind::C) CHECK(bits_subset(m2.bits, recs[i].bits));
}

TEST_CASE("upper bound: every multiset of four families splits (k = 3)") {
  Counterexample cex = build_counterexample(3);
  N5Result plain = verify_r2_upper(cex, false, 4);
  CHECK(plain.ok);
  CHECK(plain.distinct_ok);
  CHECK(plain.multisets_checked == 13'633'830);  // C(133+3, 4)
  CHECK(plain.multisets_checked == binomial(136, 4));

  N5Result sym = verify_r2_upper(cex, true, 4);
  CHECK(sym.ok);
  CHECK(sym.multisets_checked < plain.multisets_checked);
}

TEST_CASE("ground symmetries leave the construction invariant") {
  Counterexample cex = build_counterexample(3);
  const int m = cex.nerve.ground_size;
  std::mt19937 rng(414);
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(nerve_relabel(cex.nerve, perm) == cex.nerve);
  }
}

TEST_CASE("upper-bound budget failure suggests symmetry reduction") {
  Counterexample cex = build_counterexample(3);
  BudgetCounter tiny{1000};
  CHECK_THROWS_WITH_AS(verify_r2_upper(cex, false, 1, &tiny),
                       doctest::Contains("symmetry reduction"), budget_error);
}

TEST_CASE("space-level crosscheck certifies both sides on the 140-point space") {
  Counterexample cex = build_counterexample(3);
  SpaceR2Crosscheck cc = crosscheck_space_r2(cex, 4);
  CHECK(cc.point_count == 140);  // 133 families + one novel point per ground point
  CHECK(cc.upper_ok);
  CHECK(cc.lower_ok);
  CHECK(cc.quadruples_checked == 15'329'615);  // C(140, 4)
  CHECK(cc.quadruples_checked == binomial(140, 4));
  CHECK(cc.lower_triple == std::array<std::size_t, 3>{index_of_a(cex, 0), index_of_a(cex, 1),
                                                      index_of_a(cex, 2)});
}

TEST_CASE("nerve of the constructed space reproduces the construction") {
  Counterexample cex = build_counterexample(3);
  ConstructedSpace cs = make_constructed_space(cex.nerve);
  CHECK(cs.maximal_count == 133);
  CHECK(cs.points.size() == 140);
  CHECK(constructed_nerve(cs) == cex.nerve);
  // The explicit materialization is out of reach: 140 points exceed the
  // bitmask ground limit.
  CHECK_THROWS_AS(nerve_to_space(cex.nerve), std::invalid_argument);
}

TEST_CASE("report assembles the full verdict") {
  CexOptions opts;
  opts.use_symmetry = true;
  opts.jobs = 4;
  CexReport rep = counterexample_report(3, opts);
  CHECK(rep.verified);
  CHECK(rep.r2_upper_ok);
  CHECK(rep.no_k_disjoint);
  CHECK(rep.packing_max == 2);
  CHECK(rep.ground_size == 7);
  CHECK(rep.total == 133);
  CHECK(rep.iterated_bound == 7);
  CHECK(rep.certified_lower == 8);
  REQUIRE(rep.r2_lower_triple.has_value());
  REQUIRE(rep.r2_lower_ids.size() == 3);
  CHECK(cex_id_name(rep.r2_lower_ids[0]) == "A[0]");
  CHECK(cex_id_name(rep.r2_lower_ids[1]) == "A[1]");
  CHECK(cex_id_name(rep.r2_lower_ids[2]) == "A[2]");
  CHECK(rep.elapsed_seconds > 0.0);

  nlohmann::json j = nlohmann::json::parse(cex_report_json(rep));
  CHECK(j["verified"] == true);
  CHECK(j["families"]["total"] == 133);
  CHECK(j["r2_upper"]["ok"] == true);
  CHECK(j["r2_upper"]["symmetry"] == true);
  CHECK(j["r2_lower"]["names"][0] == "A[0]");
  CHECK(j["radon"]["iterated_bound"] == 7);
  CHECK(j["radon"]["certified_lower"] == 8);
  CHECK(j["packing"]["ok"] == true);
  CHECK_FALSE(j.contains("elapsed"));         // timing never lands in the document
  CHECK_FALSE(j.contains("elapsed_seconds"));
  CHECK_FALSE(j.contains("space_crosscheck"));  // not requested above

  // Identical runs give identical bytes.
  CHECK(cex_report_json(rep) == cex_report_json(counterexample_report(3, opts)));
}

TEST_CASE("nerve JSON roundtrip of the construction") {
  Counterexample cex = build_counterexample(3);
  CHECK(nerve_from_json(nerve_to_json(cex.nerve)) == cex.nerve);
}
