#include "cvx/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cvx/parallel.hpp"
#include "cvx/radon.hpp"

namespace cvx {

namespace {

std::string tuple_err(const char* fn, const std::string& what) {
  return std::string(fn) + ": " + what;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tuple families and shadows.

TupleFamily make_tuple_family(int d, int r, int ground_size,
                              std::vector<std::vector<SubsetMask>> tuples) {
  if (d < 1) throw std::invalid_argument(tuple_err("make_tuple_family", "dimension must be >= 1"));
  check_ground(ground_size);
  if (r < 0 || r > ground_size)
    throw std::invalid_argument(tuple_err("make_tuple_family", "uniformity out of range"));
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != d)
      throw std::invalid_argument(tuple_err("make_tuple_family", "tuple is not " +
                                                                     std::to_string(d) +
                                                                     "-dimensional"));
    for (SubsetMask s : t) {
      if (!subset_of(s, full_mask(ground_size)))
        throw std::invalid_argument(
            tuple_err("make_tuple_family", "coordinate escapes the ground set"));
      if (popcount(s) != r)
        throw std::invalid_argument(tuple_err(
            "make_tuple_family", "coordinate needs exactly " + std::to_string(r) + " elements"));
    }
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  return TupleFamily{d, r, ground_size, std::move(tuples)};
}

TupleFamily full_tuple_family(int d, int r, int ground_size, std::uint64_t cap) {
  if (d < 1) throw std::invalid_argument(tuple_err("full_tuple_family", "dimension must be >= 1"));
  check_ground(ground_size);
  if (r < 0 || r > ground_size)
    throw std::invalid_argument(tuple_err("full_tuple_family", "uniformity out of range"));
  std::vector<SubsetMask> subs;
  for_each_subset_of_size(ground_size, r, [&](SubsetMask s) { subs.push_back(s); });
  long double total = powl(static_cast<long double>(subs.size()), d);
  if (total > static_cast<long double>(cap))
    throw budget_error("full_tuple_family: " + std::to_string(static_cast<double>(total)) +
                       " tuples exceed the cap of " + std::to_string(cap));
  std::vector<std::vector<SubsetMask>> tuples;
  tuples.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> odo(d, 0);
  while (true) {
    std::vector<SubsetMask> t(d);
    for (int c = 0; c < d; ++c) t[c] = subs[odo[c]];
    tuples.push_back(std::move(t));
    int c = d - 1;
    while (c >= 0 && ++odo[c] == subs.size()) odo[c--] = 0;
    if (c < 0) break;
  }
  return make_tuple_family(d, r, ground_size, std::move(tuples));
}

TupleFamily shadow(const TupleFamily& f) {
  if (f.r == 0) throw std::domain_error("shadow: a 0-uniform family has no shadow");
  std::vector<std::vector<SubsetMask>> out;
  std::vector<SubsetMask> cur(f.d);
  // For each tuple, walk the r^d ways of deleting one element per coordinate.
  std::function<void(const std::vector<SubsetMask>&, int)> drop =
      [&](const std::vector<SubsetMask>& t, int c) {
        if (c == f.d) {
          out.push_back(cur);
          return;
        }
        for (int x : mask_indices(t[c])) {
          cur[c] = t[c] & ~bit(x);
          drop(t, c + 1);
        }
      };
  for (const auto& t : f.tuples) drop(t, 0);
  return make_tuple_family(f.d, f.r - 1, f.ground_size, std::move(out));
}

double generalized_binomial(double x, int r) {
  if (r < 0) throw std::domain_error("generalized_binomial: negative uniformity");
  long double num = 1.0L, den = 1.0L;
  for (int i = 0; i < r; ++i) {
    num *= static_cast<long double>(x) - i;
    den *= i + 1;
  }
  return static_cast<double>(num / den);
}

double invert_binomial(double v, int r, int d) {
  if (v < 1.0) throw std::domain_error("invert_binomial: need a family size of at least 1");
  if (r < 1) throw std::domain_error("invert_binomial: uniformity must be >= 1");
  if (d < 1) throw std::domain_error("invert_binomial: dimension must be >= 1");
  const double target = std::pow(v, 1.0 / d);
  // binomial(x, r) increases from 1 at x = r and passes v^(1/d) <= v before
  // x = r + v, so the root is bracketed.
  double lo = r, hi = r + v;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (generalized_binomial(mid, r) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

KkReport check_kk_bound(const TupleFamily& f) {
  if (f.tuples.empty()) throw std::invalid_argument("check_kk_bound: the family is empty");
  TupleFamily sh = shadow(f);
  KkReport rep;
  rep.family_size = f.tuples.size();
  rep.shadow_size = sh.tuples.size();
  rep.x = invert_binomial(static_cast<double>(rep.family_size), f.r, f.d);
  rep.bound = std::pow(generalized_binomial(rep.x, f.r - 1), f.d);
  rep.slack = static_cast<double>(rep.shadow_size) - rep.bound;
  if (rep.slack < -1e-6)
    throw property_violation(
        "check_kk_bound: shadow of size " + std::to_string(rep.shadow_size) +
        " undercuts the lower bound " + std::to_string(rep.bound) + " (family size " +
        std::to_string(rep.family_size) + ", d=" + std::to_string(f.d) +
        ", r=" + std::to_string(f.r) + ")");
  return rep;
}

// ---------------------------------------------------------------------------
// r-good tuples.

bool is_r_good(const std::vector<SubsetMask>& tuple, int r) {
  const int d = static_cast<int>(tuple.size());
  if (r <= 0) return true;
  if (r > d) return false;
  if (r == 1) return true;
  // Intersection graph on the d coordinates.
  std::vector<SubsetMask> adj(d, 0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (tuple[i] & tuple[j]) {
        adj[i] |= bit(j);
        adj[j] |= bit(i);
      }
  for (SubsetMask s = full_mask(r); s; s = next_same_popcount(s, d)) {
    bool independent = true;
    for (SubsetMask t = s; t; t &= t - 1)
      if (adj[lowest_bit(t)] & s) {
        independent = false;
        break;
      }
    if (independent) return true;
  }
  return false;
}

std::uint64_t labeled_forest_count(int d) {
  if (d < 1 || d > 7)
    throw std::invalid_argument("labeled_forest_count: supported for 1 <= d <= 7");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
  const int ne = static_cast<int>(pairs.size());
  std::uint64_t count = 0;
  int root[7], rank_[7];
  // A forest has at most d-1 edges, so only sparse edge sets need testing.
  for (int e = 0; e <= d - 1; ++e) {
    for_each_subset_of_size(ne, e, [&](SubsetMask g) {
      for (int i = 0; i < d; ++i) {
        root[i] = i;
        rank_[i] = 0;
      }
      auto find = [&](int v) {
        while (root[v] != v) v = root[v] = root[root[v]];
        return v;
      };
      bool acyclic = true;
      for (SubsetMask t = g; t && acyclic; t &= t - 1) {
        auto [a, b] = pairs[lowest_bit(t)];
        int ra = find(a), rb = find(b);
        if (ra == rb) {
          acyclic = false;
        } else if (rank_[ra] < rank_[rb]) {
          root[ra] = rb;
        } else {
          root[rb] = ra;
          if (rank_[ra] == rank_[rb]) ++rank_[ra];
        }
      }
      if (acyclic) ++count;
    });
  }
  return count;
}

RBadReport count_r_bad(int ground_size, int a, int d, int r, const RBadOptions& opts,
                       BudgetCounter* budget) {
  check_ground(ground_size);
  if (a < 1 || a > ground_size)
    throw std::invalid_argument("count_r_bad: coordinate size out of range");
  if (d < 1 || d > 32) throw std::invalid_argument("count_r_bad: dimension out of range");
  if (r < 1 || r > d) throw std::invalid_argument("count_r_bad: need 1 <= r <= d");

  const std::uint64_t nsub = binomial(ground_size, a);
  const long double total_ld = powl(static_cast<long double>(nsub), d);
  RBadReport rep;
  rep.total = static_cast<double>(total_ld);
  rep.bound = static_cast<double>(
      static_cast<long double>(labeled_forest_count(d)) *
      powl(static_cast<long double>(a) * a / ground_size, d - r + 1) * total_ld);

  if (total_ld <= static_cast<long double>(opts.exact_cap)) {
    std::uint64_t total = 1;
    for (int c = 0; c < d; ++c) total *= nsub;
    std::vector<SubsetMask> subs;
    subs.reserve(nsub);
    for_each_subset_of_size(ground_size, a, [&](SubsetMask s) { subs.push_back(s); });
    auto chunk = [&](std::uint64_t lo, std::uint64_t hi, std::atomic<bool>&) -> std::uint64_t {
      std::uint64_t bad = 0;
      std::vector<SubsetMask> tup(d);
      for (std::uint64_t idx = lo; idx < hi; ++idx) {
        if (budget && ((idx - lo) & 4095) == 0) budget->tick(4096, "r-bad tuples");
        std::uint64_t x = idx;
        for (int c = 0; c < d; ++c) {
          tup[c] = subs[x % nsub];
          x /= nsub;
        }
        if (!is_r_good(tup, r)) ++bad;
      }
      return bad;
    };
    rep.bad = parallel_ranges<std::uint64_t>(
        0, total, opts.jobs, chunk, 0,
        [](std::uint64_t& into, std::uint64_t part) { into += part; });
    rep.exhaustive = true;
    rep.checked = total;
    rep.bad_estimate = static_cast<double>(rep.bad);
    rep.within_bound = rep.bad_estimate <= rep.bound * (1 + 1e-12) + 1e-9;
    return rep;
  }

  // Beyond the exact cap: seeded uniform sampling, single-threaded so the
  // stream of draws (and thus the report) is reproducible.
  rep.exhaustive = false;
  std::mt19937_64 rng(opts.seed);
  std::vector<int> master(ground_size);
  std::iota(master.begin(), master.end(), 0);
  std::vector<int> pool;
  std::vector<SubsetMask> tup(d);
  std::uint64_t bad = 0;
  for (std::uint64_t smp = 0; smp < opts.samples; ++smp) {
    if (budget && (smp & 1023) == 0) budget->tick(1024, "r-bad samples");
    for (int c = 0; c < d; ++c) {
      pool = master;
      SubsetMask mask = 0;
      for (int j = 0; j < a; ++j) {
        std::uint64_t pick = j + rng() % (ground_size - j);
        std::swap(pool[j], pool[pick]);
        mask |= bit(pool[j]);
      }
      tup[c] = mask;
    }
    if (!is_r_good(tup, r)) ++bad;
  }
  rep.checked = opts.samples;
  rep.bad = bad;
  const double p =
      opts.samples ? static_cast<double>(bad) / static_cast<double>(opts.samples) : 0.0;
  rep.bad_estimate = p * rep.total;
  rep.std_error =
      rep.total * std::sqrt(std::max(0.0, p * (1.0 - p) /
                                              static_cast<double>(std::max<std::uint64_t>(
                                                  1, opts.samples))));
  rep.within_bound = rep.bad_estimate <= rep.bound;
  return rep;
}

// ---------------------------------------------------------------------------
// Hypergraph independence.

Hypergraph make_hypergraph(int n, int s, std::vector<SubsetMask> edges) {
  check_ground(n);
  if (s < 1 || s > n) throw std::invalid_argument("make_hypergraph: edge size out of range");
  for (SubsetMask e : edges) {
    if (!subset_of(e, full_mask(n)))
      throw std::invalid_argument("make_hypergraph: edge escapes the vertex set");
    if (popcount(e) != s)
      throw std::invalid_argument("make_hypergraph: edge needs exactly " + std::to_string(s) +
                                  " vertices");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Hypergraph{n, s, std::move(edges)};
}

std::optional<SubsetMask> turan_independent(const Hypergraph& h, int l, BudgetCounter* budget) {
  if (h.n > 20) throw std::invalid_argument("turan_independent: exact search needs n <= 20");
  if (l < 0) throw std::invalid_argument("turan_independent: negative set size");
  if (l == 0) return SubsetMask{0};
  if (l > h.n) return std::nullopt;
  std::uint64_t seen = 0;
  for (SubsetMask s = full_mask(l); s; s = next_same_popcount(s, h.n)) {
    if (budget && (++seen & 1023) == 0) budget->tick(1024, "independent-set candidates");
    bool independent = true;
    for (SubsetMask e : h.edges)
      if (subset_of(e, s)) {
        independent = false;
        break;
      }
    if (independent) return s;
  }
  return std::nullopt;
}

double turan_threshold(int n, int s, int l) {
  if (s < 1 || s > l || l > n)
    throw std::invalid_argument("turan_threshold: need 1 <= s <= l <= n");
  return static_cast<double>(binomial(n, s)) * (n - l + 1) /
         (static_cast<double>(n - s + 1) * static_cast<double>(binomial(l - 1, s - 1)));
}

namespace {

// Depth-limited search for an edge set of the given size meeting every
// member of `targets` (each target = an l-subset that must contain an edge).
bool blocking_cover_dfs(const std::vector<SubsetMask>& targets, int depth,
                        std::vector<std::pair<int, int>>& chosen, BudgetCounter* budget) {
  if (budget) budget->tick(1, "blocking-cover nodes");
  // First still-uncovered target (covered = some chosen edge inside it).
  SubsetMask open = 0;
  for (SubsetMask t : targets) {
    bool covered = false;
    for (const auto& [i, j] : chosen)
      if (has_bit(t, i) && has_bit(t, j)) {
        covered = true;
        break;
      }
    if (!covered) {
      open = t;
      break;
    }
  }
  if (!open) return true;
  if (depth == 0) return false;
  std::vector<int> verts = mask_indices(open);
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      chosen.emplace_back(verts[i], verts[j]);
      if (blocking_cover_dfs(targets, depth - 1, chosen, budget)) return true;
      chosen.pop_back();
    }
  return false;
}

}  // namespace

std::uint64_t min_edges_blocking_independent(int n, int l, BudgetCounter* budget) {
  if (l < 2) throw std::invalid_argument("min_edges_blocking_independent: need l >= 2");
  if (n < 1 || n > 12)
    throw std::invalid_argument("min_edges_blocking_independent: exact search needs n <= 12");
  if (l > n) return 0;  // no l-subsets exist, so nothing needs blocking
  std::vector<SubsetMask> targets;
  for_each_subset_of_size(n, l, [&](SubsetMask s) { targets.push_back(s); });
  std::vector<std::pair<int, int>> chosen;
  for (int c = 0;; ++c) {
    chosen.clear();
    if (blocking_cover_dfs(targets, c, chosen, budget)) return c;
  }
}

LocalGlobalReport local_to_global_independent(const Hypergraph& g, int s, int t,
                                              BudgetCounter* budget) {
  if (g.s != 2)
    throw std::invalid_argument("local_to_global_independent: expects a graph (2-uniform)");
  if (g.n > 18)
    throw std::invalid_argument("local_to_global_independent: exact search needs n <= 18");
  if (t < 1 || t >= s || s > g.n)
    throw std::invalid_argument("local_to_global_independent: need 0 < t < s <= n");

  LocalGlobalReport rep;
  rep.hypothesis_holds = true;
  std::uint64_t seen = 0;
  for (SubsetMask sub = full_mask(s); sub; sub = next_same_popcount(sub, g.n)) {
    if (budget && (++seen & 255) == 0) budget->tick(256, "hypothesis subsets");
    std::vector<int> verts = mask_indices(sub);
    bool has_indep = false;
    for (SubsetMask pick = full_mask(t); pick && !has_indep;
         pick = next_same_popcount(pick, s)) {
      SubsetMask cand = 0;
      for (int i : mask_indices(pick)) cand |= bit(verts[i]);
      bool independent = true;
      for (SubsetMask e : g.edges)
        if (subset_of(e, cand)) {
          independent = false;
          break;
        }
      has_indep = independent;
    }
    if (!has_indep) {
      rep.hypothesis_holds = false;
      rep.failing_subset = sub;
      return rep;
    }
  }
  rep.independent = turan_independent(g, g.n - s + 1, budget);
  return rep;
}

// ---------------------------------------------------------------------------
// Disjoint subsets inside one nerve family.

namespace {

SubsetMask to_global(const std::vector<int>& pts, SubsetMask local) {
  SubsetMask g = 0;
  for (int i : mask_indices(local)) g |= bit(pts[i]);
  return g;
}

// Ground point whose trace family contains every member; certifies the
// family as a nerve member.
int certifying_point(const ConvexitySpace& space, const std::vector<int>& pts,
                     const UpFamily& family, const char* who) {
  SubsetMask inter = full_mask(space.n);
  for (SubsetMask s : family.min_sets) inter &= hull(space, to_global(pts, s));
  if (!inter)
    throw property_violation(std::string(who) +
                             ": the produced family has empty hull-intersection");
  return lowest_bit(inter);
}

}  // namespace

DisjointSubsets jamison_disjoint_subsets(const ConvexitySpace& space, SubsetMask pprime, int t,
                                         BudgetCounter* budget) {
  if (t < 0 || t > 6) throw std::invalid_argument("jamison_disjoint_subsets: t out of range");
  if (!pprime || !subset_of(pprime, full_mask(space.n)))
    throw std::invalid_argument("jamison_disjoint_subsets: bad point set");

  RadonNumberResult r2res = radon_number(space, 2, budget);
  if (!r2res.attained)
    throw std::invalid_argument(
        "jamison_disjoint_subsets: the space does not attain its second Radon number");
  const int r2 = r2res.value;
  std::uint64_t want = 1;
  for (int i = 0; i < t; ++i) {
    want *= static_cast<std::uint64_t>(r2);
    if (want > static_cast<std::uint64_t>(kMaxGround))
      throw std::invalid_argument("jamison_disjoint_subsets: r2^t exceeds the ground cap");
  }
  if (static_cast<std::uint64_t>(popcount(pprime)) != want)
    throw std::invalid_argument("jamison_disjoint_subsets: |P'| must be exactly r2^t = " +
                                std::to_string(want));

  const std::vector<int> pts = mask_indices(pprime);
  const int m = static_cast<int>(pts.size());

  // step(lo, hi, tt): family over [0, m) plus 2^tt disjoint local subsets of
  // the index block [lo, hi).
  std::function<std::pair<UpFamily, std::vector<SubsetMask>>(int, int, int)> step =
      [&](int lo, int hi, int tt) -> std::pair<UpFamily, std::vector<SubsetMask>> {
    if (tt == 0) return {UpFamily{m, {bit(lo)}}, {bit(lo)}};
    const int block = (hi - lo) / r2;
    std::vector<UpFamily> fams;
    std::vector<std::vector<SubsetMask>> subs;
    fams.reserve(r2);
    subs.reserve(r2);
    for (int i = 0; i < r2; ++i) {
      auto [f, ss] = step(lo + i * block, lo + (i + 1) * block, tt - 1);
      fams.push_back(std::move(f));
      subs.push_back(std::move(ss));
    }
    N5WitnessResult w = n5_witness(space, pts, fams, 2, budget);
    std::vector<SubsetMask> lifted;
    lifted.reserve(std::size_t{1} << tt);
    const std::size_t half = std::size_t{1} << (tt - 1);
    for (const auto& group : w.groups)
      for (std::size_t j = 0; j < half; ++j) {
        SubsetMask u = 0;
        for (std::size_t i : group) u |= subs[i][j];
        if (!family_member(w.merged, u))
          throw property_violation(
              "jamison_disjoint_subsets: a lifted union escaped the merged family");
        lifted.push_back(u);
      }
    return {std::move(w.merged), std::move(lifted)};
  };

  auto [family, locals] = step(0, m, t);

  // Re-validation from first principles.
  if (locals.size() != (std::size_t{1} << t))
    throw property_violation("jamison_disjoint_subsets: wrong subset count");
  SubsetMask seen = 0;
  DisjointSubsets out;
  for (SubsetMask loc : locals) {
    if (!loc || (seen & loc))
      throw property_violation("jamison_disjoint_subsets: subsets are not pairwise disjoint");
    seen |= loc;
    if (!family_member(family, loc))
      throw property_violation("jamison_disjoint_subsets: a subset is not in the family");
    out.subsets.push_back(to_global(pts, loc));
  }
  out.containing_point = certifying_point(space, pts, family, "jamison_disjoint_subsets");
  out.family = std::move(family);
  return out;
}

std::optional<KDisjointCommon> find_k_disjoint_common(const ConvexitySpace& space, SubsetMask pts_mask,
                                                      int k, BudgetCounter* budget) {
  if (!pts_mask || !subset_of(pts_mask, full_mask(space.n)))
    throw std::invalid_argument("find_k_disjoint_common: bad point set");
  const int m = popcount(pts_mask);
  if (m > 12)
    throw std::invalid_argument("find_k_disjoint_common: exact search needs |P| <= 12");
  if (k < 1) throw std::invalid_argument("find_k_disjoint_common: need k >= 1");
  if (k > m) return std::nullopt;

  const std::vector<int> pts = mask_indices(pts_mask);
  if (k == 1) {
    KDisjointCommon out;
    out.parts = {pts_mask};
    out.family = UpFamily{m, {full_mask(m)}};
    out.containing_point = lowest_bit(hull(space, pts_mask));
    return out;
  }

  RadonNumberResult r2res = radon_number(space, 2, budget);
  if (!r2res.attained)
    throw std::invalid_argument(
        "find_k_disjoint_common: the space does not attain its second Radon number");
  const int r2 = r2res.value;
  const int b = std::min(k, 2 * r2 - 3);
  const Nerve nv = compute_nerve(space, pts_mask);

  // Attempts to certify one candidate partition (local part masks, indexed by
  // their class label). Returns the common family on success.
  auto try_candidate = [&](const std::vector<SubsetMask>& parts)
      -> std::optional<UpFamily> {
    // Families for part-index sets, keyed by bitmask over [0, k).
    std::map<std::uint32_t, UpFamily> memo;

    // Base layer: a maximal nerve family containing every part of each
    // b-subset; bail out as soon as one b-subset has none.
    bool feasible = true;
    for_each_subset_of_size(k, b, [&](SubsetMask bset) {
      if (!feasible) return;
      const UpFamily* found = nullptr;
      for (const UpFamily& mf : nv.maximal_families) {
        bool all = true;
        for (int i : mask_indices(bset))
          if (!family_member(mf, parts[i])) {
            all = false;
            break;
          }
        if (all) {
          found = &mf;
          break;
        }
      }
      if (!found)
        feasible = false;
      else
        memo.emplace(static_cast<std::uint32_t>(bset), *found);
    });
    if (!feasible) return std::nullopt;

    // Merge layer: the family of a larger index set is built from r2 of its
    // (size-1)-subsets, which each miss at most one index, so the merged
    // family keeps every part.
    std::function<const UpFamily&(std::uint32_t)> build =
        [&](std::uint32_t iset) -> const UpFamily& {
      auto it = memo.find(iset);
      if (it != memo.end()) return it->second;
      std::vector<std::uint32_t> smaller;
      for (int e : mask_indices(iset)) smaller.push_back(iset & ~static_cast<std::uint32_t>(bit(e)));
      std::sort(smaller.begin(), smaller.end());
      smaller.resize(static_cast<std::size_t>(r2));
      std::vector<UpFamily> fams;
      fams.reserve(r2);
      for (std::uint32_t sub : smaller) fams.push_back(build(sub));
      N5WitnessResult w = n5_witness(space, pts, fams, 2, budget);
      for (int i : mask_indices(iset))
        if (!family_member(w.merged, parts[i]))
          throw property_violation("find_k_disjoint_common: a merged family lost a part");
      return memo.emplace(iset, std::move(w.merged)).first->second;
    };
    return build(full_mask(k));
  };

  // Candidates: partitions of [0, m) into exactly k blocks, in
  // restricted-growth order.
  std::vector<int> label(m, 0);
  std::vector<SubsetMask> parts(k, 0);
  std::optional<KDisjointCommon> result;
  std::function<bool(int, int)> gen = [&](int pos, int maxl) -> bool {
    if (pos == m) {
      if (maxl + 1 != k) return false;
      if (budget) budget->tick(1, "k-disjoint candidates");
      std::fill(parts.begin(), parts.end(), 0);
      for (int i = 0; i < m; ++i) parts[label[i]] |= bit(i);
      std::optional<UpFamily> fam = try_candidate(parts);
      if (!fam) return false;
      KDisjointCommon out;
      for (SubsetMask p : parts) {
        if (!family_member(*fam, p))
          throw property_violation("find_k_disjoint_common: certified family misses a part");
        out.parts.push_back(to_global(pts, p));
      }
      out.containing_point = certifying_point(space, pts, *fam, "find_k_disjoint_common");
      out.family = std::move(*fam);
      result = std::move(out);
      return true;
    }
    const int lim = std::min(maxl + 1, k - 1);
    for (int c = 0; c <= lim; ++c) {
      const int newmax = std::max(maxl, c);
      // Remaining positions must still be able to open the missing classes.
      if (k - 1 - newmax > m - pos - 1) continue;
      label[pos] = c;
      if (gen(pos + 1, newmax)) return true;
    }
    return false;
  };
  gen(1, 0);  // position 0 is always labeled 0
  return result;
}

// ---------------------------------------------------------------------------
// Text formats.

namespace {

// Strips comments/blank lines, returning content lines with 1-based numbers.
std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.emplace_back(no, line);
  }
  return out;
}

std::vector<int> parse_indices(const std::string& token_text, int line_no, const char* what) {
  std::string prepared = token_text;
  std::replace(prepared.begin(), prepared.end(), ',', ' ');
  std::istringstream in(prepared);
  std::vector<int> out;
  std::string tok;
  while (in >> tok) {
    if (tok == "-") continue;  // explicit empty-set marker
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("trailing junk");
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad " + what +
                                  " index '" + tok + "'");
    }
  }
  return out;
}

[[noreturn]] void line_fail(int line_no, const std::string& what) {
  throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string tuple_family_to_text(const TupleFamily& f) {
  std::ostringstream out;
  out << f.d << ' ' << f.r << ' ' << f.ground_size << '\n';
  for (const auto& t : f.tuples) {
    for (int c = 0; c < f.d; ++c) {
      if (c) out << " | ";
      std::vector<int> idx = mask_indices(t[c]);
      if (idx.empty()) out << '-';
      for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? " " : "") << idx[i];
    }
    out << '\n';
  }
  return out.str();
}

TupleFamily tuple_family_from_text(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw std::invalid_argument("tuple family text: missing 'd r ground' header");
  std::istringstream head(lines[0].second);
  int d = 0, r = -1, ground = 0;
  std::string extra;
  if (!(head >> d >> r >> ground) || (head >> extra))
    line_fail(lines[0].first, "header must be exactly 'd r ground_size'");
  std::vector<std::vector<SubsetMask>> tuples;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& [no, line] = lines[li];
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == '|') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(cur);
    if (static_cast<int>(fields.size()) != d)
      line_fail(no, "expected " + std::to_string(d) + " coordinates separated by '|', got " +
                        std::to_string(fields.size()));
    std::vector<SubsetMask> t;
    for (const std::string& fld : fields) {
      std::vector<int> idx = parse_indices(fld, no, "coordinate");
      SubsetMask mask = 0;
      for (int v : idx) {
        if (v < 0 || v >= ground) line_fail(no, "index " + std::to_string(v) + " out of range");
        if (has_bit(mask, v)) line_fail(no, "repeated index " + std::to_string(v));
        mask |= bit(v);
      }
      if (popcount(mask) != r)
        line_fail(no, "coordinate needs exactly " + std::to_string(r) + " indices");
      t.push_back(mask);
    }
    tuples.push_back(std::move(t));
  }
  return make_tuple_family(d, r, ground, std::move(tuples));
}

TupleFamily tuple_family_from_stream(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return tuple_family_from_text(buf.str());
}

std::string hypergraph_to_text(const Hypergraph& h) {
  std::ostringstream out;
  out << h.n << ' ' << h.s << '\n';
  for (SubsetMask e : h.edges) {
    std::vector<int> idx = mask_indices(e);
    for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? " " : "") << idx[i];
    out << '\n';
  }
  return out.str();
}

Hypergraph hypergraph_from_text(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw std::invalid_argument("hypergraph text: missing 'n s' header");
  std::istringstream head(lines[0].second);
  int n = 0, s = 0;
  std::string extra;
  if (!(head >> n >> s) || (head >> extra))
    line_fail(lines[0].first, "header must be exactly 'n s'");
  std::vector<SubsetMask> edges;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& [no, line] = lines[li];
    std::vector<int> idx = parse_indices(line, no, "vertex");
    SubsetMask mask = 0;
    for (int v : idx) {
      if (v < 0 || v >= n) line_fail(no, "vertex " + std::to_string(v) + " out of range");
      if (has_bit(mask, v)) line_fail(no, "repeated vertex " + std::to_string(v));
      mask |= bit(v);
    }
    if (popcount(mask) != s)
      line_fail(no, "edge needs exactly " + std::to_string(s) + " vertices");
    edges.push_back(mask);
  }
  return make_hypergraph(n, s, std::move(edges));
}

Hypergraph hypergraph_from_stream(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return hypergraph_from_text(buf.str());
}

}  // namespace cvx
