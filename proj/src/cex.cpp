#include "cvx/cex.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvx/parallel.hpp"
#include "json.hpp"

namespace cvx {

namespace {

constexpr std::size_t kNoRec = static_cast<std::size_t>(-1);

std::string point_list(const int* p, int count) {
  std::string s;
  for (int i = 0; i < count; ++i) {
    if (i) s += ' ';
    s += std::to_string(p[i]);
  }
  return s;
}

}  // namespace

std::string cex_id_name(const CexFamilyId& id) {
  switch (id.kind) {
    case CexKind::A:
      return "A[" + std::to_string(id.params[0]) + "]";
    case CexKind::B:
      return "B[" + point_list(id.params.data(), 2) + " : " + point_list(id.params.data() + 2, 2) +
             "]";
    case CexKind::C:
      return "C[" + point_list(id.params.data(), 2) + "]";
  }
  return "?";
}

Counterexample build_counterexample(int k) {
  if (k < 3) throw std::invalid_argument("build_counterexample: k must be at least 3");
  const int m = 3 * (k - 1) + 1;
  if (m > kMaxDenseGround)
    throw budget_error("build_counterexample: ground size " + std::to_string(m) +
                       " exceeds the dense-family limit of " + std::to_string(kMaxDenseGround));

  std::vector<SubsetMask> all3, all4;
  for_each_subset_of_size(m, 3, [&](SubsetMask s) { all3.push_back(s); });
  for_each_subset_of_size(m, 4, [&](SubsetMask s) { all4.push_back(s); });
  std::vector<std::pair<int, int>> pairs;  // lexicographic (x < y)
  for (int x = 0; x < m; ++x)
    for (int y = x + 1; y < m; ++y) pairs.emplace_back(x, y);

  std::vector<std::pair<UpFamily, CexFamilyId>> fams;
  Counterexample cex;
  cex.k = k;

  for (int x = 0; x < m; ++x) {
    std::vector<SubsetMask> gens = all4;
    gens.push_back(bit(x));
    fams.emplace_back(up_closure(std::move(gens), m),
                      CexFamilyId{CexKind::A, {x, -1, -1, -1}});
    ++cex.a_count;
  }
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (std::size_t q = p + 1; q < pairs.size(); ++q) {
      auto [x, y] = pairs[p];
      auto [z, w] = pairs[q];
      SubsetMask quad = bit(x) | bit(y) | bit(z) | bit(w);
      if (popcount(quad) != 4) continue;  // pairs must be disjoint
      std::vector<SubsetMask> gens = all4;
      gens.push_back(bit(x) | bit(y));
      gens.push_back(bit(z) | bit(w));
      for (SubsetMask s : all3)
        if (s & quad) gens.push_back(s);
      fams.emplace_back(up_closure(std::move(gens), m),
                        CexFamilyId{CexKind::B, {x, y, z, w}});
      ++cex.b_count;
    }
  for (auto [x, y] : pairs) {
    std::vector<SubsetMask> gens = all3;
    gens.push_back(bit(x) | bit(y));
    fams.emplace_back(up_closure(std::move(gens), m),
                      CexFamilyId{CexKind::C, {x, y, -1, -1}});
    ++cex.c_count;
  }

  std::sort(fams.begin(), fams.end(),
            [](const auto& a, const auto& b) { return family_less(a.first, b.first); });
  for (std::size_t i = 0; i + 1 < fams.size(); ++i)
    if (fams[i].first == fams[i + 1].first)
      throw property_violation("build_counterexample: families " + cex_id_name(fams[i].second) +
                               " and " + cex_id_name(fams[i + 1].second) + " coincide");

  cex.nerve.ground_size = m;
  cex.nerve.maximal_families.reserve(fams.size());
  cex.ids.reserve(fams.size());
  for (auto& [f, id] : fams) {
    cex.nerve.maximal_families.push_back(std::move(f));
    cex.ids.push_back(id);
  }
  return cex;
}

std::vector<SubsetMask> pair_members(const UpFamily& f) {
  std::vector<SubsetMask> out;
  for (int j = 1; j < f.ground_size; ++j)  // j-major: masks come out ascending
    for (int i = 0; i < j; ++i) {
      SubsetMask s = bit(i) | bit(j);
      if (family_member(f, s)) out.push_back(s);
    }
  return out;
}

// ---------------------------------------------------------------------------
// KindIndex

KindIndex::KindIndex(const Counterexample& cex, const std::vector<FamilyRec>& recs)
    : recs_(&recs), m_(cex.nerve.ground_size) {
  if (binomial(m_, 2) > 64)
    throw std::invalid_argument("KindIndex: needs pair profiles, so ground size <= 11");
  if (recs.size() != cex.ids.size())
    throw std::invalid_argument("KindIndex: records not aligned with family ids");
  const std::size_t pc = static_cast<std::size_t>(binomial(m_, 2));
  a_of_point_.assign(m_, kNoRec);
  c_of_pair_.assign(pc, kNoRec);
  b_of_pairs_.assign(64 * 64, kNoRec);
  b_with_pair_.assign(pc, {});
  pair_mask_.assign(pc, 0);
  for (int i = 0; i < m_; ++i)
    for (int j = i + 1; j < m_; ++j) pair_mask_[pair_index(i, j, m_)] = bit(i) | bit(j);
  for (std::size_t idx = 0; idx < cex.ids.size(); ++idx) {
    const CexFamilyId& id = cex.ids[idx];
    switch (id.kind) {
      case CexKind::A:
        a_of_point_[id.params[0]] = idx;
        break;
      case CexKind::B: {
        int p1 = pair_index(id.params[0], id.params[1], m_);
        int p2 = pair_index(id.params[2], id.params[3], m_);
        b_of_pairs_[static_cast<std::size_t>(p1) * 64 + p2] = idx;
        b_with_pair_[p1].push_back(idx);
        b_with_pair_[p2].push_back(idx);
        break;
      }
      case CexKind::C:
        c_of_pair_[pair_index(id.params[0], id.params[1], m_)] = idx;
        break;
    }
  }
  for (int x = 0; x < m_; ++x)
    if (a_of_point_[x] == kNoRec)
      throw std::invalid_argument("KindIndex: missing A family for point " + std::to_string(x));
  for (std::size_t p = 0; p < pc; ++p)
    if (c_of_pair_[p] == kNoRec)
      throw std::invalid_argument("KindIndex: missing C family for some pair");
}

bool KindIndex::test(std::size_t rec, const FamilyRec& u) const {
  return rec != kNoRec && bits_subset(u.bits, (*recs_)[rec].bits);
}

bool KindIndex::contains_superset(const FamilyRec& u) const {
  if (bits_empty_member(u.bits)) return false;  // no family holds the empty set
  int ns = popcount(u.singles);
  if (ns >= 2) return false;  // no family holds two distinct singletons
  if (ns == 1) return test(a_of_point_[lowest_bit(u.singles)], u);
  std::uint64_t p = u.pairs;
  int np = popcount(p);
  // No singleton or pair members: every member has >= 3 points, and each C
  // family holds all such sets, so one inclusion test settles it.
  if (np == 0) return test(c_of_pair_[0], u);
  if (np == 1) {
    int pi = lowest_bit(p);
    if (test(c_of_pair_[pi], u)) return true;
    SubsetMask pm = pair_mask_[pi];
    int x = lowest_bit(pm);
    int y = lowest_bit(pm & (pm - 1));
    if (test(a_of_point_[x], u) || test(a_of_point_[y], u)) return true;
    for (std::size_t b : b_with_pair_[pi])
      if (test(b, u)) return true;
    return false;
  }
  // Two or more pairs: an A candidate needs a point common to all of them
  // (unique if it exists), a B candidate needs the pairs to be exactly its
  // two disjoint ones, and C is out.
  SubsetMask common = full_mask(m_);
  for (std::uint64_t q = p; q && common; q &= q - 1) common &= pair_mask_[lowest_bit(q)];
  if (common != 0) return test(a_of_point_[lowest_bit(common)], u);
  if (np == 2) {
    int p1 = lowest_bit(p);
    int p2 = lowest_bit(p & (p - 1));
    return test(b_of_pairs_[static_cast<std::size_t>(p1) * 64 + p2], u);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Verifications

N5Result verify_r2_upper(const Counterexample& cex, bool use_symmetry, int jobs,
                         BudgetCounter* budget) {
  std::vector<FamilyRec> recs = build_family_recs(cex.nerve);
  KindIndex index(cex, recs);
  N5Options opts;
  opts.jobs = jobs;
  opts.budget = budget;
  opts.index = &index;
  const int m = cex.nerve.ground_size;
  std::vector<std::vector<int>> gens;
  if (use_symmetry) {
    std::vector<int> swap01(m), rot(m);
    for (int i = 0; i < m; ++i) {
      swap01[i] = i;
      rot[i] = (i + 1) % m;
    }
    swap01[0] = 1;
    swap01[1] = 0;
    gens = {swap01, rot};
    opts.symmetry = &gens;
  }
  try {
    return check_n5_abstract(cex.nerve, 4, 2, opts);
  } catch (const budget_error& e) {
    if (!use_symmetry)
      throw budget_error(std::string(e.what()) +
                         "; symmetry reduction (use_symmetry) shrinks this search");
    throw;
  }
}

std::optional<std::array<std::size_t, 3>> verify_r2_lower(const Counterexample& cex) {
  std::vector<FamilyRec> recs = build_family_recs(cex.nerve);
  KindIndex index(cex, recs);
  const std::size_t n = recs.size();
  const int m = cex.nerve.ground_size;
  FamilyRec meet{make_empty_bits(m), 0, 0}, u{make_empty_bits(m), 0, 0};
  auto splits = [&](std::size_t solo, std::size_t g1, std::size_t g2) {
    rec_and(recs[g1], recs[g2], meet);
    rec_or(recs[solo], meet, u);
    return index.contains_superset(u);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t l = j + 1; l < n; ++l)
        if (!splits(i, j, l) && !splits(j, i, l) && !splits(l, i, j))
          return std::array<std::size_t, 3>{i, j, l};
  return std::nullopt;
}

int verify_no_k_disjoint(const Nerve& nv) {
  int best = 0;
  for (const UpFamily& f : nv.maximal_families) best = std::max(best, max_disjoint_members(f));
  return best;
}

// ---------------------------------------------------------------------------
// Space-level crosscheck

namespace {

// Lexicographic unranking of the rank-th 4-subset of [0, n).
std::array<int, 4> unrank_quadruple(std::uint64_t rank, int n) {
  std::array<int, 4> q{};
  int prev = -1;
  for (int slot = 0; slot < 4; ++slot) {
    for (int v = prev + 1;; ++v) {
      std::uint64_t block = binomial(n - 1 - v, 3 - slot);
      if (rank < block) {
        q[slot] = v;
        prev = v;
        break;
      }
      rank -= block;
    }
  }
  return q;
}

bool next_quadruple(std::array<int, 4>& q, int n) {
  for (int s = 3; s >= 0; --s) {
    if (q[s] < n - (4 - s)) {
      ++q[s];
      for (int t = s + 1; t < 4; ++t) q[t] = q[t - 1] + 1;
      return true;
    }
  }
  return false;
}

struct CrosscheckChunk {
  std::uint64_t checked = 0;
  bool ok = true;
  std::array<int, 4> failing{};
};

}  // namespace

SpaceR2Crosscheck crosscheck_space_r2(const Counterexample& cex, int jobs,
                                      BudgetCounter* budget) {
  const int m = cex.nerve.ground_size;
  std::vector<FamilyRec> maximal_recs = build_family_recs(cex.nerve);
  KindIndex index(cex, maximal_recs);

  ConstructedSpace cs = make_constructed_space(cex.nerve);
  const int np = static_cast<int>(cs.points.size());
  std::vector<FamilyRec> yrecs(np);
  for (int i = 0; i < np; ++i) {
    yrecs[i].bits = cs.bits[i];
    yrecs[i].singles = extract_singles(cs.bits[i]);
    yrecs[i].pairs = extract_pairs(cs.bits[i]);
  }

  // Hulls of two groups of points intersect exactly when some point family
  // contains the union of the two groups' pointwise intersections, and the
  // point families that matter are the maximal ones. So each 4-subset needs
  // one of its seven 2-part splits to pass the containment index.
  const auto partitions = slot_partitions(4, 2);
  const std::uint64_t total = binomial(np, 4);

  auto chunk = [&](std::uint64_t lo, std::uint64_t hi, std::atomic<bool>& stop) {
    CrosscheckChunk acc;
    if (lo >= hi) return acc;
    std::array<int, 4> q = unrank_quadruple(lo, np);
    std::array<FamilyRec, 16> buf;
    for (auto& r : buf) r = FamilyRec{make_empty_bits(m), 0, 0};
    FamilyRec u{make_empty_bits(m), 0, 0};
    std::uint64_t since_tick = 0;
    for (std::uint64_t rank = lo; rank < hi; ++rank, next_quadruple(q, np)) {
      if (++since_tick == 4096 || rank + 1 == hi) {
        if (budget) budget->tick(since_tick, "crosscheck quadruples");
        since_tick = 0;
        if (stop.load(std::memory_order_relaxed)) return acc;
      }
      for (std::uint32_t mask = 3; mask < 15; ++mask) {
        int nbits = popcount(mask);
        if (nbits < 2) continue;
        int lo_slot = lowest_bit(mask);
        std::uint32_t rest = mask & (mask - 1);
        const FamilyRec& left = nbits == 2 ? yrecs[q[lowest_bit(rest)]] : buf[rest];
        rec_and(left, yrecs[q[lo_slot]], buf[mask]);
      }
      bool good = false;
      for (const auto& part : partitions) {
        const FamilyRec& g0 = popcount(part[0]) == 1 ? yrecs[q[lowest_bit(part[0])]] : buf[part[0]];
        const FamilyRec& g1 = popcount(part[1]) == 1 ? yrecs[q[lowest_bit(part[1])]] : buf[part[1]];
        rec_or(g0, g1, u);
        if (index.contains_superset(u)) {
          good = true;
          break;
        }
      }
      ++acc.checked;
      if (!good && acc.ok) {
        acc.ok = false;
        acc.failing = q;
      }
    }
    return acc;
  };
  auto merge = [](CrosscheckChunk& into, CrosscheckChunk&& part) {
    if (into.ok && !part.ok) {
      into.ok = false;
      into.failing = part.failing;
    }
    into.checked += part.checked;
  };
  CrosscheckChunk scan = parallel_ranges(std::uint64_t{0}, total, jobs, chunk,
                                         CrosscheckChunk{}, merge);

  SpaceR2Crosscheck out;
  out.point_count = np;
  out.quadruples_checked = scan.checked;
  out.upper_ok = scan.ok;

  // Lower bound: the family-level witness triple, reread as three points of
  // the space (maximal families sit at the same indices), must fail all
  // three of its splits.
  auto triple = verify_r2_lower(cex);
  if (triple) {
    auto [i, j, l] = *triple;
    out.lower_triple = {i, j, l};
    FamilyRec meet{make_empty_bits(m), 0, 0}, u{make_empty_bits(m), 0, 0};
    auto splits = [&](std::size_t solo, std::size_t g1, std::size_t g2) {
      rec_and(yrecs[g1], yrecs[g2], meet);
      rec_or(yrecs[solo], meet, u);
      return index.contains_superset(u);
    };
    out.lower_ok = !splits(i, j, l) && !splits(j, i, l) && !splits(l, i, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report

CexReport counterexample_report(int k, const CexOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  Counterexample cex = build_counterexample(k);
  CexReport rep;
  rep.k = k;
  rep.ground_size = cex.nerve.ground_size;
  rep.a_count = cex.a_count;
  rep.b_count = cex.b_count;
  rep.c_count = cex.c_count;
  rep.total = cex.nerve.maximal_families.size();
  rep.used_symmetry = opts.use_symmetry;
  rep.n5 = verify_r2_upper(cex, opts.use_symmetry, opts.jobs, opts.budget);
  rep.r2_upper_ok = rep.n5.ok;
  rep.r2_lower_triple = verify_r2_lower(cex);
  if (rep.r2_lower_triple)
    for (std::size_t idx : *rep.r2_lower_triple) rep.r2_lower_ids.push_back(cex.ids[idx]);
  rep.packing_max = verify_no_k_disjoint(cex.nerve);
  rep.no_k_disjoint = rep.packing_max < k;
  rep.iterated_bound = 3 * (k - 1) + 1;
  rep.certified_lower = 3 * (k - 1) + 2;
  rep.verified = rep.r2_upper_ok && rep.r2_lower_triple.has_value() && rep.no_k_disjoint;
  if (opts.space_crosscheck) {
    rep.crosscheck = crosscheck_space_r2(cex, opts.jobs, opts.budget);
    rep.verified = rep.verified && rep.crosscheck->upper_ok && rep.crosscheck->lower_ok;
  }
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string cex_report_json(const CexReport& rep) {
  nlohmann::ordered_json j;
  j["k"] = rep.k;
  j["ground_size"] = rep.ground_size;
  j["families"] = {{"a", rep.a_count}, {"b", rep.b_count}, {"c", rep.c_count},
                   {"total", rep.total}};
  nlohmann::ordered_json upper;
  upper["ok"] = rep.r2_upper_ok;
  upper["multisets_checked"] = rep.n5.multisets_checked;
  upper["symmetry"] = rep.used_symmetry;
  if (!rep.n5.ok) {
    upper["failing"] = rep.n5.failing;
    upper["failing_has_repeats"] = rep.n5.failing_has_repeats;
    upper["distinct_ok"] = rep.n5.distinct_ok;
  }
  j["r2_upper"] = std::move(upper);
  nlohmann::ordered_json lower;
  lower["found"] = rep.r2_lower_triple.has_value();
  if (rep.r2_lower_triple) {
    lower["triple"] = *rep.r2_lower_triple;
    auto& names = lower["names"] = nlohmann::ordered_json::array();
    for (const CexFamilyId& id : rep.r2_lower_ids) names.push_back(cex_id_name(id));
  }
  j["r2_lower"] = std::move(lower);
  j["packing"] = {{"max", rep.packing_max}, {"k", rep.k}, {"ok", rep.no_k_disjoint}};
  j["radon"] = {{"iterated_bound", rep.iterated_bound}, {"certified_lower", rep.certified_lower}};
  if (rep.crosscheck) {
    const SpaceR2Crosscheck& c = *rep.crosscheck;
    j["space_crosscheck"] = {{"point_count", c.point_count},
                             {"upper_ok", c.upper_ok},
                             {"quadruples_checked", c.quadruples_checked},
                             {"lower_triple", c.lower_triple},
                             {"lower_ok", c.lower_ok}};
  }
  j["verified"] = rep.verified;
  return j.dump(2);
}

}  // namespace cvx
