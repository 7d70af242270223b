#include "cvx/space.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "cvx/budget.hpp"
#include "json.hpp"

namespace cvx {

ConvexitySpace intersection_closure(const std::vector<SubsetMask>& generators, int n,
                                    std::size_t cap) {
  check_ground(n);
  const SubsetMask full = full_mask(n);
  std::vector<SubsetMask> sets;
  sets.reserve(generators.size() + 2);
  sets.push_back(0);
  sets.push_back(full);
  for (SubsetMask g : generators) {
    if (!subset_of(g, full))
      throw std::invalid_argument("generator has bits beyond ground size " + std::to_string(n));
    sets.push_back(g);
  }
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());

  // Worklist closure: intersect every new set against everything seen so far.
  std::vector<SubsetMask> work(sets.begin(), sets.end());
  std::vector<SubsetMask> known = sets;
  std::sort(known.begin(), known.end());
  while (!work.empty()) {
    SubsetMask a = work.back();
    work.pop_back();
    for (std::size_t i = 0, sz = sets.size(); i < sz; ++i) {
      SubsetMask c = a & sets[i];
      if (!std::binary_search(known.begin(), known.end(), c)) {
        known.insert(std::lower_bound(known.begin(), known.end(), c), c);
        sets.push_back(c);
        work.push_back(c);
        if (known.size() > cap)
          throw budget_error("intersection_closure: closure exceeds cap of " +
                             std::to_string(cap) + " sets");
      }
    }
  }
  return ConvexitySpace{n, std::move(known)};
}

SubsetMask hull(const ConvexitySpace& space, SubsetMask points) {
  SubsetMask acc = full_mask(space.n);
  for (SubsetMask c : space.convex_sets)
    if (subset_of(points, c)) acc &= c;
  return acc;
}

std::vector<SubsetMask> all_hulls(const ConvexitySpace& space) {
  if (space.n > 24) throw std::invalid_argument("all_hulls: ground size too large to tabulate");
  std::vector<SubsetMask> table(std::size_t{1} << space.n);
  for (SubsetMask m = 0; m < (SubsetMask{1} << space.n); ++m) table[m] = hull(space, m);
  return table;
}

SpaceValidation is_valid_space(const ConvexitySpace& space) {
  if (space.n < 1 || space.n > kMaxGround)
    return {false, "ground size " + std::to_string(space.n) + " out of range"};
  const SubsetMask full = full_mask(space.n);
  const auto& cs = space.convex_sets;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!subset_of(cs[i], full))
      return {false, "set #" + std::to_string(i) + " has bits beyond ground size"};
    if (i > 0 && cs[i] <= cs[i - 1])
      return {false, "convex_sets not sorted strictly ascending at #" + std::to_string(i)};
  }
  if (cs.empty() || cs.front() != 0) return {false, "empty set missing"};
  if (cs.back() != full) return {false, "full ground set missing"};
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      SubsetMask c = cs[i] & cs[j];
      if (!std::binary_search(cs.begin(), cs.end(), c))
        return {false, "intersection of sets #" + std::to_string(i) + " and #" +
                           std::to_string(j) + " (" + mask_to_hex(c, space.n) + ") missing"};
    }
  return {true, ""};
}

ConvexitySpace make_interval_space(int n) {
  check_ground(n);
  std::vector<SubsetMask> sets{0};
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) sets.push_back(full_mask(b + 1) & ~full_mask(a));
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return ConvexitySpace{n, std::move(sets)};
}

ConvexitySpace make_singleton_space(int n) {
  check_ground(n);
  std::vector<SubsetMask> sets{0, full_mask(n)};
  for (int i = 0; i < n; ++i) sets.push_back(bit(i));
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return ConvexitySpace{n, std::move(sets)};
}

ConvexitySpace make_free_space(int n) {
  check_ground(n);
  if (n > 20) throw std::invalid_argument("free space ground size capped at 20");
  std::vector<SubsetMask> sets(std::size_t{1} << n);
  for (std::size_t m = 0; m < sets.size(); ++m) sets[m] = static_cast<SubsetMask>(m);
  return ConvexitySpace{n, std::move(sets)};
}

ConvexitySpace make_box_space(const std::vector<int>& dims) {
  if (dims.empty()) throw std::invalid_argument("box space needs at least one axis");
  std::uint64_t n = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("box axis sizes must be positive");
    n *= static_cast<std::uint64_t>(d);
    if (n > kMaxGround) throw std::invalid_argument("box space exceeds ground cap");
  }
  const int nd = static_cast<int>(dims.size());
  const int npts = static_cast<int>(n);

  // Enumerate sub-boxes as one interval [lo, hi] per axis.
  std::vector<SubsetMask> sets{0};
  std::vector<std::pair<int, int>> range(nd);
  auto emit = [&]() {
    SubsetMask m = 0;
    for (int idx = 0; idx < npts; ++idx) {
      int rem = idx;
      bool inside = true;
      for (int i = nd - 1; i >= 0; --i) {
        int c = rem % dims[i];
        rem /= dims[i];
        if (c < range[i].first || c > range[i].second) {
          inside = false;
          break;
        }
      }
      if (inside) m |= bit(idx);
    }
    sets.push_back(m);
  };
  // Iterate all per-axis interval choices.
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == nd) {
      emit();
      return;
    }
    for (int lo = 0; lo < dims[axis]; ++lo)
      for (int hi = lo; hi < dims[axis]; ++hi) {
        range[axis] = {lo, hi};
        self(self, axis + 1);
      }
  };
  rec(rec, 0);
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return ConvexitySpace{npts, std::move(sets)};
}

ConvexitySpace parse_space_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("space spec '" + spec + "' must look like kind:params");
  std::string kind = spec.substr(0, colon);
  std::string params = spec.substr(colon + 1);
  auto parse_int = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "' in space spec");
    return v;
  };
  if (kind == "interval") return make_interval_space(parse_int(params));
  if (kind == "singleton") return make_singleton_space(parse_int(params));
  if (kind == "free") return make_free_space(parse_int(params));
  if (kind == "box") {
    std::vector<int> dims;
    std::stringstream ss(params);
    std::string tok;
    while (std::getline(ss, tok, 'x')) dims.push_back(parse_int(tok));
    return make_box_space(dims);
  }
  throw std::invalid_argument("unknown space kind '" + kind + "'");
}

std::string space_to_json(const ConvexitySpace& space) {
  nlohmann::ordered_json j;
  j["n"] = space.n;
  auto& arr = j["convex_sets"] = nlohmann::ordered_json::array();
  for (SubsetMask m : space.convex_sets) arr.push_back(mask_to_hex(m, space.n));
  return j.dump(2);
}

static ConvexitySpace space_from_parsed(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("convex_sets"))
    throw std::invalid_argument("space document must have fields 'n' and 'convex_sets'");
  ConvexitySpace s;
  s.n = j.at("n").get<int>();
  check_ground(s.n);
  for (const auto& e : j.at("convex_sets"))
    s.convex_sets.push_back(mask_from_hex(e.get<std::string>(), s.n));
  return s;
}

ConvexitySpace space_from_json(const std::string& text) {
  return space_from_parsed(nlohmann::json::parse(text));
}

ConvexitySpace space_from_stream(std::istream& in) {
  nlohmann::json j;
  in >> j;
  return space_from_parsed(j);
}

}  // namespace cvx
