#include "cvx/jamison.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvx/radon.hpp"

namespace cvx {

namespace {

std::string triple_name(int a, int b, int c) {
  return "{" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "}";
}

std::string local_set_name(SubsetMask s, const std::vector<int>& pts) {
  std::string out = "{";
  bool first = true;
  for (int i : mask_indices(s)) {
    if (!first) out += ",";
    out += std::to_string(pts[i]);
    first = false;
  }
  return out + "}";
}

}  // namespace

JamisonSystem build_jamison_system(const ConvexitySpace& space, SubsetMask points,
                                   std::size_t lattice_cap) {
  if (points == 0 || !subset_of(points, full_mask(space.n)))
    throw std::invalid_argument("build_jamison_system: point set must be a non-empty subset of the ground set");
  RadonNumberResult r2 = radon_number(space, 2);
  if (r2.value != 3)
    throw std::invalid_argument("build_jamison_system: needs second Radon number exactly 3, got " +
                                std::to_string(r2.value));
  std::vector<int> pts = mask_indices(points);
  const int m = static_cast<int>(pts.size());
  if (m > kMaxDenseGround || (std::size_t{1} << m) > lattice_cap)
    throw budget_error("build_jamison_system: 2^" + std::to_string(m) +
                       " subset families exceed the lattice cap");

  // F_i is the trace family of the point pts[i] itself: all S ⊆ P whose hull
  // contains pts[i].  Every member's hull passes through pts[i], so the family
  // is realized with witness pts[i].  This choice, rather than a maximal trace
  // family containing {p}, is deliberate: maximal families can violate the
  // transfer property J3 on spaces where some singleton hull is non-trivial,
  // while the point's own trace family satisfies J1 (p ∈ hull{p}) and J3
  // (q ∈ hull{r,s} implies hull{q,r} ⊆ hull{r,s}) in every space.  The two
  // choices coincide whenever all singletons of P are convex.
  std::vector<FamilyBits> fx(m, make_empty_bits(m));
  for (SubsetMask s = 1; s < (SubsetMask{1} << m); ++s) {
    SubsetMask g = 0;
    for (int i : mask_indices(s)) g |= bit(pts[i]);
    SubsetMask h = hull(space, g);
    for (int i = 0; i < m; ++i)
      if (has_bit(h, pts[i])) fx[i].set(s);
  }

  JamisonSystem sys;
  sys.pts = pts;
  sys.families.reserve(m);
  sys.witnesses.reserve(m);
  for (int i = 0; i < m; ++i) {
    sys.families.push_back(family_of_bits(fx[i]));
    sys.witnesses.push_back(pts[i]);
  }

  // Post-hoc verification of the three exchange properties.  J1 and J3 hold
  // by hull algebra; J2 is a genuine check: it asks every triple to admit a
  // point-in-pair-hull split, which r₂ = 3 guarantees only when the triple's
  // singleton hulls are trivial.
  for (int i = 0; i < m; ++i)
    if (!family_member(sys.families[i], bit(i)))
      throw property_violation("J1 fails: {" + std::to_string(pts[i]) + "} not in its family");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int l = j + 1; l < m; ++l) {
        bool ok = family_member(sys.families[l], bit(i) | bit(j)) ||
                  family_member(sys.families[j], bit(i) | bit(l)) ||
                  family_member(sys.families[i], bit(j) | bit(l));
        if (ok) continue;
        std::string fat;
        for (int t : {i, j, l})
          if (hull(space, bit(pts[t])) != bit(pts[t]))
            fat += (fat.empty() ? "" : ",") + std::to_string(pts[t]);
        throw property_violation("J2 fails on triple " + triple_name(pts[i], pts[j], pts[l]) +
                                 ": no point lies in the hull of the other two"
                                 " (points with non-convex singleton hulls: {" +
                                 fat + "})");
      }
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          if (p == q || p == r || p == s || q == r || q == s || r == s) continue;
          if (family_member(sys.families[p], bit(q) | bit(r)) &&
              family_member(sys.families[q], bit(r) | bit(s)) &&
              !family_member(sys.families[p], bit(r) | bit(s)))
            throw property_violation("J3 fails: p=" + std::to_string(pts[p]) +
                                     " q=" + std::to_string(pts[q]) + " r=" + std::to_string(pts[r]) +
                                     " s=" + std::to_string(pts[s]));
        }
  return sys;
}

JamisonTverberg jamison_tverberg(const JamisonSystem& sys, int k) {
  const int m = static_cast<int>(sys.pts.size());
  if (k < 1) throw std::invalid_argument("jamison_tverberg: k must be at least 1");
  if (m < 2 * (k - 1) + 1)
    throw std::invalid_argument("jamison_tverberg: needs at least 2(k-1)+1 = " +
                                std::to_string(2 * (k - 1) + 1) + " points, have " +
                                std::to_string(m));

  // Lexicographically first pair of live points lying in every other live
  // point's family.
  auto find_pair = [&](SubsetMask live) -> std::optional<SubsetMask> {
    for (int i = 0; i < m; ++i) {
      if (!has_bit(live, i)) continue;
      for (int j = i + 1; j < m; ++j) {
        if (!has_bit(live, j)) continue;
        SubsetMask pm = bit(i) | bit(j);
        bool ok = true;
        for (int r : mask_indices(live & ~pm))
          if (!family_member(sys.families[r], pm)) {
            ok = false;
            break;
          }
        if (ok) return pm;
      }
    }
    return std::nullopt;
  };

  JamisonTverberg out;
  SubsetMask live = full_mask(m);
  for (int stage = k; stage > 1; --stage) {
    auto pm = find_pair(live);
    if (!pm) {
      std::string dump = "jamison_tverberg: no admissible pair with " + std::to_string(stage) +
                         " parts still to build; live points " + local_set_name(live, sys.pts) +
                         "; rejections:";
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          if (!has_bit(live, i) || !has_bit(live, j)) continue;
          for (int r : mask_indices(live & ~(bit(i) | bit(j))))
            if (!family_member(sys.families[r], bit(i) | bit(j))) {
              dump += " " + local_set_name(bit(i) | bit(j), sys.pts) + " not in F_" +
                      std::to_string(sys.pts[r]) + ";";
              break;
            }
        }
      throw property_violation(dump);
    }
    out.parts.push_back(*pm);
    live &= ~*pm;
  }
  out.parts.push_back(live);
  out.family_index = static_cast<std::size_t>(lowest_bit(live));

  const UpFamily& home = sys.families[out.family_index];
  for (SubsetMask part : out.parts)
    if (!family_member(home, part))
      throw property_violation("jamison_tverberg: assembled part " +
                               local_set_name(part, sys.pts) + " escapes the final family F_" +
                               std::to_string(sys.pts[out.family_index]));
  return out;
}

SelectionResult selection_statistic(const ConvexitySpace& space, SubsetMask points) {
  std::vector<int> pts = mask_indices(points);
  const int n = static_cast<int>(pts.size());
  if (n < 3) throw std::invalid_argument("selection_statistic: needs at least 3 points");
  if (!subset_of(points, full_mask(space.n)))
    throw std::invalid_argument("selection_statistic: points outside the ground set");

  std::vector<SubsetMask> pair_hulls;
  pair_hulls.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pair_hulls.push_back(hull(space, bit(pts[i]) | bit(pts[j])));

  SelectionResult best;
  for (int x = 0; x < space.n; ++x) {
    std::int64_t count = 0;
    for (SubsetMask h : pair_hulls) count += has_bit(h, x);
    if (count > best.count) {
      best.best_point = x;
      best.count = count;
    }
  }
  if (best.count * n < static_cast<std::int64_t>(binomial(n, 3)))
    throw property_violation("selection_statistic: best count " + std::to_string(best.count) +
                             " falls below C(" + std::to_string(n) + ",3)/" + std::to_string(n));
  return best;
}

}  // namespace cvx
