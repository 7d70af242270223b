#include "cvx/radon.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace cvx {

namespace {

// Unordered partitions into exactly k non-empty parts, enumerated in
// restricted-growth order: element i may join any already-open part or open
// the next one. Every set partition appears exactly once, so no part-order
// symmetry is wasted and, crucially, no completion is missed. (Pinning the
// k lowest elements to k distinct parts would be faster but is wrong: there
// are spaces whose only valid partition puts the two lowest points in the
// same part.)
struct PartitionSearch {
  const ConvexitySpace& space;
  const std::vector<SubsetMask>* hulls;
  BudgetCounter* budget;
  std::vector<int> elems;
  int k;
  std::vector<SubsetMask> parts;
  std::uint64_t pending_ticks = 0;

  SubsetMask hull_of(SubsetMask m) const { return hulls ? (*hulls)[m] : hull(space, m); }

  void tick() {
    if (budget && ++pending_ticks >= 1024) {
      budget->tick(pending_ticks, "tverberg_partition");
      pending_ticks = 0;
    }
  }

  // Upper bound on the set of common witnesses still reachable: each open
  // part can only grow inside `rest`, and parts not yet opened are subsets
  // of `rest`.
  bool feasible(SubsetMask rest) {
    SubsetMask acc = full_mask(space.n);
    for (SubsetMask p : parts) {
      acc &= hull_of(p | rest);
      if (!acc) return false;
    }
    if (static_cast<int>(parts.size()) < k) {
      acc &= hull_of(rest);
      if (!acc) return false;
    }
    return true;
  }

  std::optional<TverbergPartition> run(std::size_t i, SubsetMask rest) {
    tick();
    if (i == elems.size()) {
      if (static_cast<int>(parts.size()) != k) return std::nullopt;
      SubsetMask acc = full_mask(space.n);
      for (SubsetMask p : parts) acc &= hull_of(p);
      if (!acc) return std::nullopt;
      return TverbergPartition{parts, lowest_bit(acc)};
    }
    if (static_cast<int>(parts.size()) + static_cast<int>(elems.size() - i) < k)
      return std::nullopt;
    SubsetMask b = bit(elems[i]);
    SubsetMask rest_after = rest & ~b;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      parts[j] |= b;
      if (feasible(rest_after))
        if (auto found = run(i + 1, rest_after)) return found;
      parts[j] &= ~b;
    }
    if (static_cast<int>(parts.size()) < k) {
      parts.push_back(b);
      if (feasible(rest_after))
        if (auto found = run(i + 1, rest_after)) return found;
      parts.pop_back();
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<TverbergPartition> tverberg_partition(const ConvexitySpace& space, SubsetMask points,
                                                    int k, BudgetCounter* budget,
                                                    const std::vector<SubsetMask>* hulls) {
  if (k < 1) throw std::invalid_argument("tverberg_partition: k must be positive");
  if (!subset_of(points, full_mask(space.n)))
    throw std::invalid_argument("tverberg_partition: points outside ground set");
  if (popcount(points) < k) return std::nullopt;
  PartitionSearch search{space, hulls, budget, mask_indices(points), k, {}, 0};
  auto result = search.run(0, points);
  if (budget && search.pending_ticks) budget->tick(search.pending_ticks, "tverberg_partition");
  return result;
}

RadonNumberResult radon_number(const ConvexitySpace& space, int k, BudgetCounter* budget) {
  if (k < 2) throw std::invalid_argument("radon_number: k must be at least 2");
  const int n = space.n;
  // Hull lookups dominate the partition search; tabulate when the table is
  // clearly affordable.
  std::vector<SubsetMask> table;
  const std::vector<SubsetMask>* hulls = nullptr;
  if (n <= 16 && (std::size_t{1} << n) * space.convex_sets.size() <= (std::size_t{1} << 25)) {
    table = all_hulls(space);
    hulls = &table;
  }

  RadonNumberResult res;
  res.k = k;
  const SubsetMask full = full_mask(n);
  if (!tverberg_partition(space, full, k, budget, hulls)) {
    res.value = n + 1;
    res.attained = false;
    res.certificate = full;
    return res;
  }
  // Non-partitionable sets are closed under taking subsets, so the first
  // size (descending) with a failure carries the maximum.
  for (int s = n - 1; s >= 1; --s) {
    for (SubsetMask m = full_mask(s); m; m = next_same_popcount(m, n)) {
      if (!tverberg_partition(space, m, k, budget, hulls)) {
        res.value = s + 1;
        res.attained = true;
        res.certificate = m;
        return res;
      }
    }
  }
  res.value = 1;  // every non-empty subset k-partitions (only possible for k = 1)
  res.attained = true;
  res.certificate = 0;
  return res;
}

RecurrenceReport check_recurrences(const ConvexitySpace& space, int k_max, BudgetCounter* budget) {
  if (k_max < 2) throw std::invalid_argument("check_recurrences: k_max must be at least 2");
  RecurrenceReport rep;
  for (int k = 2; k <= k_max; ++k) rep.numbers.push_back(radon_number(space, k, budget));
  auto r = [&](int k) -> std::optional<int> {
    const auto& e = rep.numbers[k - 2];
    return e.attained ? std::optional<int>(e.value) : std::nullopt;
  };
  auto add = [&](std::string name, int lhs_k, int lhs, int rhs) {
    rep.checks.push_back({std::move(name), lhs_k, lhs, rhs, lhs <= rhs});
    rep.all_hold = rep.all_hold && rep.checks.back().holds;
  };

  for (int a = 2; a <= k_max; ++a)
    for (int b = a; b <= k_max && a * b <= k_max; ++b)
      if (r(a) && r(b) && r(a * b))
        add("r_" + std::to_string(a * b) + " <= r_" + std::to_string(a) + " * r_" +
                std::to_string(b),
            a * b, *r(a * b), *r(a) * *r(b));

  if (r(2))
    for (int k = 2; 2 * k + 1 <= k_max; ++k)
      if (r(k) && r(k + 1) && r(2 * k + 1))
        add("r_" + std::to_string(2 * k + 1) + " <= (r_2-1)(r_" + std::to_string(k + 1) +
                "-1) + r_" + std::to_string(k) + " + 1",
            2 * k + 1, *r(2 * k + 1), (*r(2) - 1) * (*r(k + 1) - 1) + *r(k) + 1);

  if (r(2)) {
    int e = std::bit_width(static_cast<unsigned>(*r(2) - 1));  // ceil(log2 r_2)
    for (int k = 2; k <= k_max; ++k)
      if (r(k)) {
        std::int64_t pw = 1;
        for (int i = 0; i < e; ++i) pw *= k;
        add("r_" + std::to_string(k) + " <= k^" + std::to_string(e), k, *r(k),
            static_cast<int>(std::min<std::int64_t>(pw, 1 << 30)));
      }
  }
  return rep;
}

CentrepointResult centrepoint(const ConvexitySpace& space, SubsetMask pts, BudgetCounter* budget) {
  if (!pts) throw std::invalid_argument("centrepoint: P must be non-empty");
  auto r2 = radon_number(space, 2, budget);
  if (!r2.attained)
    throw std::invalid_argument("centrepoint: pairwise Radon number of the space is not attained");
  CentrepointResult res;
  res.r2 = r2.value;
  const std::int64_t psz = popcount(pts);
  // strict threshold |C ∩ P| > (1 - 1/(r2-1))|P|, compared exactly:
  // |C ∩ P| (r2-1) > (r2-2) |P|
  for (int c = 0; c < space.n; ++c) {
    bool ok = true;
    for (SubsetMask C : space.convex_sets) {
      std::int64_t inter = popcount(C & pts);
      if (inter * (res.r2 - 1) > (res.r2 - 2) * psz && !has_bit(C, c)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      res.point = c;
      return res;
    }
  }
  return res;
}

namespace {

struct HittingSearch {
  const std::vector<SubsetMask>& sets;
  BudgetCounter* budget;
  std::uint64_t pending = 0;
  SubsetMask found = 0;

  void tick() {
    if (budget && ++pending >= 256) {
      budget->tick(pending, "weak_epsilon_net");
      pending = 0;
    }
  }

  // Branch on the points of the first unhit set: any hitting set must use
  // one of them, so the search is complete; iterative deepening on the net
  // size makes the first success minimum.
  bool dfs(SubsetMask chosen, int remaining) {
    tick();
    SubsetMask first_unhit = 0;
    bool all_hit = true;
    for (SubsetMask s : sets)
      if (!(s & chosen)) {
        first_unhit = s;
        all_hit = false;
        break;
      }
    if (all_hit) {
      found = chosen;
      return true;
    }
    if (remaining == 0) return false;
    for (SubsetMask t = first_unhit; t; t &= t - 1) {
      SubsetMask p = t & (~t + 1);
      if (dfs(chosen | p, remaining - 1)) return true;
    }
    return false;
  }
};

}  // namespace

SubsetMask weak_epsilon_net(const ConvexitySpace& space, SubsetMask pts, double eps,
                            BudgetCounter* budget) {
  if (eps <= 0.0) throw std::invalid_argument("weak_epsilon_net: epsilon must be positive");
  if (eps >= 1.0) return 0;  // no convex set can hold more than |P| points of P
  const double bar = eps * popcount(pts);
  std::vector<SubsetMask> heavy;
  for (SubsetMask C : space.convex_sets)
    if (static_cast<double>(popcount(C & pts)) > bar) heavy.push_back(C);
  // Keep only inclusion-minimal heavy sets: hitting those hits everything.
  std::vector<SubsetMask> minimal;
  for (SubsetMask a : heavy) {
    bool has_sub = false;
    for (SubsetMask b : heavy)
      if (b != a && subset_of(b, a)) {
        has_sub = true;
        break;
      }
    if (!has_sub) minimal.push_back(a);
  }
  if (minimal.empty()) return 0;

  HittingSearch search{minimal, budget, 0, 0};
  for (int size = 1; size <= static_cast<int>(minimal.size()); ++size) {
    search.found = 0;
    if (search.dfs(0, size)) {
      if (budget && search.pending) budget->tick(search.pending, "weak_epsilon_net");
      return search.found;
    }
  }
  return 0;  // unreachable: one point per minimal set always hits
}

}  // namespace cvx
