#include "cvx/nerve.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <istream>
#include <numeric>

#include "cvx/parallel.hpp"
#include "json.hpp"

namespace cvx {

bool nerve_member(const Nerve& nv, const UpFamily& f) {
  for (const UpFamily& g : nv.maximal_families)
    if (family_includes(g, f)) return true;
  return false;
}

static std::vector<UpFamily> maximal_of(std::vector<UpFamily> fams) {
  std::sort(fams.begin(), fams.end(), family_less);
  fams.erase(std::unique(fams.begin(), fams.end()), fams.end());
  std::vector<UpFamily> maximal;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < fams.size() && !dominated; ++j)
      if (j != i && family_includes(fams[j], fams[i])) dominated = true;
    if (!dominated) maximal.push_back(fams[i]);
  }
  return maximal;
}

Nerve nerve_relabel(const Nerve& nv, const std::vector<int>& perm) {
  std::vector<UpFamily> fams;
  fams.reserve(nv.maximal_families.size());
  for (const UpFamily& f : nv.maximal_families) fams.push_back(family_relabel(f, perm));
  std::sort(fams.begin(), fams.end(), family_less);
  return Nerve{nv.ground_size, std::move(fams)};
}

// ---------------------------------------------------------------------------

Nerve compute_nerve(const ConvexitySpace& space, SubsetMask points, std::size_t lattice_cap) {
  if (points == 0) throw std::invalid_argument("compute_nerve: empty point set");
  if (!subset_of(points, full_mask(space.n)))
    throw std::invalid_argument("compute_nerve: points outside the ground set");
  std::vector<int> pts = mask_indices(points);
  int m = static_cast<int>(pts.size());
  if (m > kMaxDenseGround || (std::size_t{1} << m) > lattice_cap)
    throw budget_error("compute_nerve: subset lattice of the point set exceeds the cap");

  // Membership bitvector of F_x = {S : x ∈ hull(S)} for every ground point.
  std::vector<FamilyBits> fx(space.n, make_empty_bits(m));
  for (SubsetMask s = 1; s <= full_mask(m); ++s) {
    SubsetMask pmask = 0;
    for (int i : mask_indices(s)) pmask |= bit(pts[i]);
    SubsetMask h = hull(space, pmask);
    for (int x : mask_indices(h)) fx[x].set(s);
  }
  std::vector<UpFamily> fams;
  for (int x = 0; x < space.n; ++x) {
    UpFamily f = family_of_bits(fx[x]);
    if (!f.min_sets.empty()) fams.push_back(std::move(f));
  }
  return Nerve{m, maximal_of(std::move(fams))};
}

// ---------------------------------------------------------------------------

int max_disjoint_members(const UpFamily& f) {
  const std::vector<SubsetMask>& sets = f.min_sets;
  int best = 0;
  auto rec = [&](auto&& self, std::size_t start, SubsetMask used, int depth) -> void {
    best = std::max(best, depth);
    for (std::size_t i = start; i < sets.size(); ++i)
      if ((sets[i] & used) == 0) self(self, i + 1, used | sets[i], depth + 1);
  };
  rec(rec, 0, 0, 0);
  return best;
}

NervePropertyReport check_n_properties(const Nerve& nv) {
  NervePropertyReport rep;
  rep.structure_ok = true;

  auto fail = [&](std::string why) {
    if (rep.structure_ok) rep.detail = std::move(why);
    rep.structure_ok = false;
  };
  if (nv.ground_size < 1 || nv.ground_size > kMaxGround) {
    fail("ground size out of range");
    return rep;
  }
  SubsetMask full = full_mask(nv.ground_size);
  const auto& fams = nv.maximal_families;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const UpFamily& f = fams[i];
    if (f.ground_size != nv.ground_size) fail("family #" + std::to_string(i) + ": ground mismatch");
    for (SubsetMask s : f.min_sets)
      if (!subset_of(s, full)) fail("family #" + std::to_string(i) + ": mask outside ground");
    if (!std::is_sorted(f.min_sets.begin(), f.min_sets.end()) ||
        std::adjacent_find(f.min_sets.begin(), f.min_sets.end()) != f.min_sets.end())
      fail("family #" + std::to_string(i) + ": min_sets not sorted/unique");
    for (std::size_t a = 0; a < f.min_sets.size(); ++a)
      for (std::size_t b = 0; b < f.min_sets.size(); ++b)
        if (a != b && subset_of(f.min_sets[a], f.min_sets[b]))
          fail("family #" + std::to_string(i) + ": min_sets not an antichain");
  }
  if (!std::is_sorted(fams.begin(), fams.end(), family_less))
    fail("maximal families not in canonical order");
  if (rep.structure_ok) {
    // Pairwise incomparability, via dense forms when they fit.
    if (nv.ground_size <= kMaxDenseGround) {
      std::vector<FamilyBits> bits;
      bits.reserve(fams.size());
      for (const UpFamily& f : fams) bits.push_back(bits_of_family(f));
      for (std::size_t i = 0; i < fams.size() && rep.structure_ok; ++i)
        for (std::size_t j = 0; j < fams.size(); ++j)
          if (i != j && bits_subset(bits[i], bits[j])) {
            fail("family #" + std::to_string(i) + " contained in #" + std::to_string(j));
            break;
          }
    } else {
      for (std::size_t i = 0; i < fams.size() && rep.structure_ok; ++i)
        for (std::size_t j = 0; j < fams.size(); ++j)
          if (i != j && family_includes(fams[j], fams[i])) {
            fail("family #" + std::to_string(i) + " contained in #" + std::to_string(j));
            break;
          }
    }
  }

  rep.point_families_ok = true;
  for (int p = 0; p < nv.ground_size; ++p) {
    bool found = false;
    for (const UpFamily& f : fams)
      if (family_member(f, bit(p))) {
        found = true;
        break;
      }
    if (!found) {
      rep.point_families_ok = false;
      if (rep.detail.empty()) rep.detail = "point family of " + std::to_string(p) + " not a member";
      break;
    }
  }

  rep.packing_max = 0;
  for (const UpFamily& f : fams) rep.packing_max = std::max(rep.packing_max, max_disjoint_members(f));
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<FamilyRec> build_family_recs(const Nerve& nv) {
  if (nv.ground_size > kMaxDenseGround)
    throw std::invalid_argument("build_family_recs: ground too large for dense families");
  bool pair_profiles = binomial(nv.ground_size, 2) <= 64;
  std::vector<FamilyRec> recs;
  recs.reserve(nv.maximal_families.size());
  for (const UpFamily& f : nv.maximal_families) {
    FamilyRec r;
    r.bits = bits_of_family(f);
    r.singles = extract_singles(r.bits);
    r.pairs = pair_profiles ? extract_pairs(r.bits) : 0;
    recs.push_back(std::move(r));
  }
  return recs;
}

bool ScanIndex::contains_superset(const FamilyRec& u) const {
  for (const FamilyRec& f : *recs_) {
    if (u.singles & ~f.singles) continue;
    if (u.pairs & ~f.pairs) continue;
    if (bits_subset(u.bits, f.bits)) return true;
  }
  return false;
}

std::vector<std::vector<std::uint32_t>> slot_partitions(int r, int t) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<int> assign(r, 0);
  auto rec = [&](auto&& self, int i, int blocks) -> void {
    if (blocks + (r - i) < t || blocks > t) return;
    if (i == r) {
      if (blocks != t) return;
      std::vector<std::uint32_t> part(t, 0);
      for (int s = 0; s < r; ++s) part[assign[s]] |= std::uint32_t{1} << s;
      out.push_back(std::move(part));
      return;
    }
    int top = std::min(blocks, t - 1);
    for (int b = 0; b <= top; ++b) {
      assign[i] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  rec(rec, 0, 0);
  return out;
}

// Orbit representatives (smallest index per orbit) of the maximal families
// under the group generated by the given ground permutations.
static std::vector<std::size_t> orbit_representatives(const Nerve& nv,
                                                      const std::vector<std::vector<int>>& gens) {
  const auto& fams = nv.maximal_families;
  auto find_index = [&](const UpFamily& f) -> std::size_t {
    auto it = std::lower_bound(fams.begin(), fams.end(), f, family_less);
    if (it == fams.end() || !(*it == f))
      throw std::invalid_argument("check_n5_abstract: a symmetry generator does not preserve the nerve");
    return static_cast<std::size_t>(it - fams.begin());
  };
  std::vector<std::size_t> parent(fams.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != nv.ground_size)
      throw std::invalid_argument("check_n5_abstract: symmetry generator has wrong size");
    SubsetMask seen = 0;
    for (int v : g) {
      if (v < 0 || v >= nv.ground_size || has_bit(seen, v))
        throw std::invalid_argument("check_n5_abstract: symmetry generator is not a permutation");
      seen |= bit(v);
    }
    for (std::size_t i = 0; i < fams.size(); ++i) {
      std::size_t j = find_index(family_relabel(fams[i], g));
      std::size_t a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < fams.size(); ++i)
    if (find(i) == i) reps.push_back(i);
  return reps;  // ascending: each orbit's smallest index is its own root
}

namespace {

struct EnumShared {
  const std::vector<FamilyRec>* recs = nullptr;
  const ContainmentIndex* index = nullptr;
  const std::vector<std::vector<std::uint32_t>>* partitions = nullptr;
  int r = 0;
  std::size_t fam_count = 0;
  std::vector<std::size_t> anchors;  // empty: enumerate all multisets
  BudgetCounter* budget = nullptr;
};

struct EnumChunk {
  std::uint64_t checked = 0;
  std::vector<std::size_t> first_any;       // earliest failing multiset, sorted
  std::vector<std::size_t> first_distinct;  // earliest repetition-free failure
};

// The scan is exhaustive — it never stops at a failure — so counts and
// certificates are identical for every job count.
struct EnumWorker {
  const EnumShared* sh;
  std::vector<std::size_t> slots;
  std::vector<FamilyRec> and_buf;  // subset-AND table over slots; [0] unused
  FamilyRec u_buf;
  EnumChunk out;
  std::uint64_t pending = 0;

  explicit EnumWorker(const EnumShared& shared)
      : sh(&shared), slots(shared.r), and_buf(std::size_t{1} << shared.r) {}

  void flush_budget() {
    if (sh->budget && pending) {
      std::uint64_t n = pending;
      pending = 0;
      sh->budget->tick(n, "partition-property multisets");
    }
  }

  void leaf() {
    ++out.checked;
    if (++pending >= 4096) flush_budget();
    const auto& recs = *sh->recs;
    const std::uint32_t top = std::uint32_t{1} << sh->r;
    for (std::uint32_t msk = 1; msk < top; ++msk) {
      int low = std::countr_zero(msk);
      if ((msk & (msk - 1)) == 0)
        and_buf[msk] = recs[slots[low]];
      else
        rec_and(and_buf[msk ^ (std::uint32_t{1} << low)], recs[slots[low]], and_buf[msk]);
    }
    bool ok = false;
    for (const auto& part : *sh->partitions) {
      u_buf = and_buf[part[0]];
      for (std::size_t g = 1; g < part.size(); ++g) rec_or(u_buf, and_buf[part[g]], u_buf);
      if (sh->index->contains_superset(u_buf)) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      std::vector<std::size_t> ms = slots;
      std::sort(ms.begin(), ms.end());
      bool repeats = std::adjacent_find(ms.begin(), ms.end()) != ms.end();
      if (out.first_any.empty()) out.first_any = ms;
      if (!repeats && out.first_distinct.empty()) out.first_distinct = std::move(ms);
    }
  }

  void plain_rec(int pos, std::size_t lo) {
    if (pos == sh->r) {
      leaf();
      return;
    }
    for (std::size_t i = lo; i < sh->fam_count; ++i) {
      slots[pos] = i;
      plain_rec(pos + 1, i);
    }
  }

  bool smaller_anchor(std::size_t v, std::size_t a_idx) const {
    for (std::size_t j = 0; j < a_idx; ++j)
      if (sh->anchors[j] == v) return true;
    return false;
  }

  void anchored_rec(int pos, std::size_t lo, std::size_t a_idx) {
    if (pos == sh->r) {
      leaf();
      return;
    }
    for (std::size_t i = lo; i < sh->fam_count; ++i) {
      if (smaller_anchor(i, a_idx)) continue;
      slots[pos] = i;
      anchored_rec(pos + 1, i, a_idx);
    }
  }
};

}  // namespace

N5Result check_n5_abstract(const Nerve& nv, int r, int t, const N5Options& opts) {
  if (t < 2 || r < t) throw std::invalid_argument("check_n5_abstract: need r >= t >= 2");
  if (r > 20) throw std::invalid_argument("check_n5_abstract: multiset size too large");

  std::vector<FamilyRec> recs = build_family_recs(nv);
  ScanIndex fallback(recs);
  auto partitions = slot_partitions(r, t);

  EnumShared sh;
  sh.recs = &recs;
  sh.index = opts.index ? opts.index : &fallback;
  sh.partitions = &partitions;
  sh.r = r;
  sh.fam_count = recs.size();
  sh.budget = opts.budget;
  if (opts.symmetry) sh.anchors = orbit_representatives(nv, *opts.symmetry);

  // Each multiset either is enumerated directly (plain mode) or, with a
  // symmetry group, has an orbit image containing an anchor: for any family f
  // in the multiset M there is a group element σ with σ(f) = rep(f), and
  // σ(M) is a multiset containing that representative. Restricting to
  // multisets whose smallest contained anchor is the current one makes the
  // anchored enumeration exact (no orbit is lost, no multiset double-counted
  // within one anchor).
  std::uint64_t outer = sh.anchors.empty()
                            ? sh.fam_count
                            : static_cast<std::uint64_t>(sh.anchors.size()) * sh.fam_count;

  // `stop` only becomes true when another worker threw (e.g. budget
  // exhaustion); honoring it never changes the result of a successful run,
  // it just ends a doomed one sooner.
  auto chunk = [&](std::uint64_t lo, std::uint64_t hi, std::atomic<bool>& stop) -> EnumChunk {
    EnumWorker w(sh);
    if (sh.anchors.empty()) {
      for (std::uint64_t o = lo; o < hi; ++o) {
        if (stop.load(std::memory_order_relaxed)) break;
        w.slots[0] = o;
        w.plain_rec(1, o);
      }
    } else {
      for (std::uint64_t o = lo; o < hi; ++o) {
        if (stop.load(std::memory_order_relaxed)) break;
        std::size_t a_idx = o / sh.fam_count;
        std::size_t i0 = o % sh.fam_count;
        if (w.smaller_anchor(i0, a_idx)) continue;
        w.slots[0] = sh.anchors[a_idx];
        w.slots[1] = i0;
        w.anchored_rec(2, i0, a_idx);
      }
    }
    w.flush_budget();
    return std::move(w.out);
  };
  auto merge = [](EnumChunk& into, EnumChunk&& part) {
    into.checked += part.checked;
    if (into.first_any.empty()) into.first_any = std::move(part.first_any);
    if (into.first_distinct.empty()) into.first_distinct = std::move(part.first_distinct);
  };
  EnumChunk total = parallel_ranges(0, outer, opts.jobs, chunk, EnumChunk{}, merge);

  N5Result res;
  res.ok = total.first_any.empty();
  res.failing = std::move(total.first_any);
  res.failing_has_repeats =
      std::adjacent_find(res.failing.begin(), res.failing.end()) != res.failing.end();
  res.distinct_ok = total.first_distinct.empty();
  res.multisets_checked = total.checked;
  return res;
}

// ---------------------------------------------------------------------------

N5WitnessResult n5_witness(const ConvexitySpace& space, const std::vector<int>& pts,
                           const std::vector<UpFamily>& families, int t, BudgetCounter* budget) {
  int m = static_cast<int>(pts.size());
  if (m < 1 || m > space.n) throw std::invalid_argument("n5_witness: bad point list");
  SubsetMask seen = 0;
  for (int p : pts) {
    if (p < 0 || p >= space.n || has_bit(seen, p))
      throw std::invalid_argument("n5_witness: point list not a subset of the ground set");
    seen |= bit(p);
  }
  int r = static_cast<int>(families.size());
  if (t < 1 || r < t) throw std::invalid_argument("n5_witness: need at least t families");
  if (r > 20) throw std::invalid_argument("n5_witness: too many families");
  auto expand = [&](SubsetMask s) {
    SubsetMask pm = 0;
    for (int i : mask_indices(s)) pm |= bit(pts[i]);
    return pm;
  };

  N5WitnessResult res;
  res.witness_points.resize(r);
  for (int i = 0; i < r; ++i) {
    if (families[i].ground_size != m)
      throw std::invalid_argument("n5_witness: family ground does not match the point list");
    // Hull is monotone, so the intersection over minimal members equals the
    // intersection over all members.
    SubsetMask inter = full_mask(space.n);
    for (SubsetMask s : families[i].min_sets) inter &= hull(space, expand(s));
    if (!inter)
      throw property_violation("n5_witness: family #" + std::to_string(i) +
                               " has empty hull-intersection, so it is not a nerve member");
    res.witness_points[i] = lowest_bit(inter);
  }

  const std::vector<std::vector<std::uint32_t>> parts = slot_partitions(r, t);
  const std::vector<std::uint32_t>* chosen = nullptr;
  int common_point = -1;
  for (const auto& part : parts) {
    if (budget) budget->tick(1, "witness partitions");
    SubsetMask common = full_mask(space.n);
    for (std::uint32_t g : part) {
      SubsetMask qmask = 0;
      for (int i : mask_indices(g)) qmask |= bit(res.witness_points[i]);
      common &= hull(space, qmask);
      if (!common) break;
    }
    if (common) {
      chosen = &part;
      common_point = lowest_bit(common);
      break;
    }
  }
  if (!chosen)
    throw property_violation(
        "n5_witness: no partition of the witness points into " + std::to_string(t) +
        " groups has intersecting hulls");

  UpFamily merged{m, {}};
  for (std::uint32_t g : *chosen) {
    std::vector<int> group = mask_indices(g);
    UpFamily inter = families[group[0]];
    for (std::size_t j = 1; j < group.size(); ++j) inter = family_intersect(inter, families[group[j]]);
    merged = res.groups.empty() ? inter : family_union(merged, inter);
    std::vector<std::size_t> idx(group.begin(), group.end());
    res.groups.push_back(std::move(idx));
  }
  res.merged = std::move(merged);
  res.containing_point = common_point;

  // The common point certifies membership: every minimal member of the merged
  // family lies in some group's intersection, and the hulls of those members
  // all contain the common point.
  for (SubsetMask s : res.merged.min_sets)
    if (!has_bit(hull(space, expand(s)), common_point))
      throw property_violation("n5_witness: merged family escapes its containing point family");
  return res;
}

// ---------------------------------------------------------------------------

ConstructedSpace make_constructed_space(const Nerve& nv) {
  if (nv.ground_size > kMaxDenseGround)
    throw std::invalid_argument("make_constructed_space: ground too large for dense families");
  ConstructedSpace cs;
  cs.base_size = nv.ground_size;
  cs.points = nv.maximal_families;
  cs.maximal_count = cs.points.size();
  cs.embedding.resize(nv.ground_size, -1);
  for (int p = 0; p < nv.ground_size; ++p) {
    UpFamily fp{nv.ground_size, {bit(p)}};
    auto it = std::lower_bound(cs.points.begin(), cs.points.begin() + cs.maximal_count, fp,
                               family_less);
    if (it != cs.points.begin() + cs.maximal_count && *it == fp) {
      cs.embedding[p] = static_cast<int>(it - cs.points.begin());
    } else {
      cs.embedding[p] = static_cast<int>(cs.points.size());
      cs.points.push_back(std::move(fp));
    }
  }
  cs.bits.reserve(cs.points.size());
  for (const UpFamily& f : cs.points) cs.bits.push_back(bits_of_family(f));
  return cs;
}

std::vector<int> constructed_hull(const ConstructedSpace& cs, const std::vector<int>& a) {
  if (a.empty()) return {};
  for (int g : a)
    if (g < 0 || g >= static_cast<int>(cs.points.size()))
      throw std::invalid_argument("constructed_hull: point index out of range");
  FamilyBits inter = cs.bits[a[0]];
  for (std::size_t i = 1; i < a.size(); ++i) bits_and(inter, cs.bits[a[i]], inter);
  std::vector<int> out;
  for (std::size_t g = 0; g < cs.bits.size(); ++g)
    if (bits_subset(inter, cs.bits[g])) out.push_back(static_cast<int>(g));
  return out;
}

Nerve constructed_nerve(const ConstructedSpace& cs) {
  int m = cs.base_size;
  // inter[S] = dense form of ⋂_{p∈S} (family of the embedded point p).
  std::vector<FamilyBits> inter(std::size_t{1} << m);
  for (SubsetMask s = 1; s <= full_mask(m); ++s) {
    int low = lowest_bit(s);
    const FamilyBits& f = cs.bits[cs.embedding[low]];
    if ((s & (s - 1)) == 0)
      inter[s] = f;
    else
      bits_and(inter[s ^ bit(low)], f, inter[s]);
  }
  std::vector<UpFamily> fams;
  std::vector<FamilyBits> fam_bits;
  for (std::size_t g = 0; g < cs.bits.size(); ++g) {
    FamilyBits memb = make_empty_bits(m);
    for (SubsetMask s = 1; s <= full_mask(m); ++s)
      if (bits_subset(inter[s], cs.bits[g])) memb.set(s);
    UpFamily f = family_of_bits(memb);
    if (!f.min_sets.empty()) {
      fams.push_back(std::move(f));
      fam_bits.push_back(std::move(memb));
    }
  }
  // Keep maximal families only, using the dense forms for the comparisons.
  std::vector<UpFamily> maximal;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < fams.size() && !dominated; ++j)
      if (j != i && (bits_subset(fam_bits[i], fam_bits[j]) &&
                     (!bits_subset(fam_bits[j], fam_bits[i]) || j < i)))
        dominated = true;
    if (!dominated) maximal.push_back(fams[i]);
  }
  std::sort(maximal.begin(), maximal.end(), family_less);
  maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
  return Nerve{m, std::move(maximal)};
}

EmbeddedSpace nerve_to_space(const Nerve& nv, std::size_t closure_cap) {
  ConstructedSpace cs = make_constructed_space(nv);
  if (cs.points.size() > static_cast<std::size_t>(kMaxGround))
    throw std::invalid_argument(
        "nerve_to_space: constructed ground exceeds 63 points; use the closed-form interface");
  int n = static_cast<int>(cs.points.size());
  std::vector<SubsetMask> gens;
  gens.reserve((std::size_t{1} << nv.ground_size) + 2);
  for (SubsetMask s = 1; s <= full_mask(nv.ground_size); ++s) {
    SubsetMask d = 0;
    for (int g = 0; g < n; ++g)
      if (cs.bits[g].get(s)) d |= bit(g);
    gens.push_back(d);
  }
  gens.push_back(0);
  gens.push_back(full_mask(n));
  return EmbeddedSpace{intersection_closure(gens, n, closure_cap), cs.embedding};
}

// ---------------------------------------------------------------------------

std::string nerve_to_json(const Nerve& nv) {
  nlohmann::ordered_json j;
  j["ground_size"] = nv.ground_size;
  auto& arr = j["maximal_families"] = nlohmann::ordered_json::array();
  for (const UpFamily& f : nv.maximal_families) {
    auto fam = nlohmann::ordered_json::array();
    for (SubsetMask s : f.min_sets) fam.push_back(mask_to_hex(s, nv.ground_size));
    arr.push_back(std::move(fam));
  }
  return j.dump(2);
}

static Nerve nerve_from_parsed(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ground_size") || !j.contains("maximal_families"))
    throw std::invalid_argument("nerve document needs ground_size and maximal_families");
  int m = j.at("ground_size").get<int>();
  check_ground(m);
  std::vector<UpFamily> fams;
  for (const auto& fam : j.at("maximal_families")) {
    std::vector<SubsetMask> mins;
    for (const auto& h : fam) mins.push_back(mask_from_hex(h.get<std::string>(), m));
    fams.push_back(up_closure(std::move(mins), m));
  }
  std::sort(fams.begin(), fams.end(), family_less);
  Nerve nv{m, std::move(fams)};
  NervePropertyReport rep = check_n_properties(nv);
  if (!rep.structure_ok)
    throw std::invalid_argument("nerve document invalid: " + rep.detail);
  return nv;
}

Nerve nerve_from_json(const std::string& text) {
  return nerve_from_parsed(nlohmann::json::parse(text));
}

Nerve nerve_from_stream(std::istream& in) {
  nlohmann::json j;
  in >> j;
  return nerve_from_parsed(j);
}

}  // namespace cvx
