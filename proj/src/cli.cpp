#include "cvx/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvx/bounds.hpp"
#include "cvx/budget.hpp"
#include "cvx/cex.hpp"
#include "cvx/jamison.hpp"
#include "cvx/nerve.hpp"
#include "cvx/radon.hpp"
#include "cvx/space.hpp"
#include "json.hpp"

namespace cvx {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct Opts {
  std::string space_spec;
  std::string in_path = "-";
  std::string points;  // empty = unset (command-specific default)
  std::string out_path;
  std::string emit_nerve;
  std::uint64_t budget = 0;  // 0 = unset, resolve from env / default
  int jobs = 1;
  std::uint64_t seed = 1;
  int k = 0;
  int kmax = 4;
  int r = 0;
  int t = -1;
  int l = 0;
  int s_size = 0;
  int t_size = 0;
  int ground = 0, a = 0, d = 0, rr = 0;
  std::uint64_t exact_cap = 10'000'000;
  std::uint64_t samples = 100'000;
  std::size_t lattice_cap = kDefaultLatticeCap;
  std::size_t closure_cap = kDefaultClosureCap;
  double eps = 0.0;
  bool symmetry = false;
  bool space_crosscheck = false;
  bool timings = false;
};

struct Ctx {
  Opts o;
  std::istream* in = nullptr;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::string command;  // resolved leaf, e.g. "radon number"
  int exit_code = 0;
};

std::uint64_t resolve_budget(const Opts& o) {
  if (o.budget != 0) return o.budget;
  if (const char* env = std::getenv("CONVEXITY_BUDGET_NODES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw std::invalid_argument("CONVEXITY_BUDGET_NODES must be a positive integer, got '" +
                                  std::string(env) + "'");
    return v;
  }
  return kDefaultBudget;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read input file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

// "-" reads the whole standard input.
std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  return read_file(path);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw std::runtime_error("failed writing output file '" + path + "'");
}

SubsetMask parse_points(const std::string& s, int n) {
  if (s == "all") return full_mask(n);
  std::string t = s;
  for (char& c : t) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(t);
  SubsetMask m = 0;
  long v = 0;
  while (is >> v) {
    if (v < 0 || v >= n)
      throw std::invalid_argument("point index " + std::to_string(v) +
                                  " out of range for ground size " + std::to_string(n));
    if (has_bit(m, static_cast<int>(v)))
      throw std::invalid_argument("repeated point index " + std::to_string(v));
    m |= bit(static_cast<int>(v));
  }
  if (!is.eof()) throw std::invalid_argument("bad point list '" + s + "'");
  if (!m) throw std::invalid_argument("the point list is empty");
  return m;
}

// Documents produced by this tool wrap their payload in an envelope; accept
// both bare documents and envelopes (payload under "report", possibly keyed).
const nlohmann::json* unwrap(const nlohmann::json& doc, const char* key,
                             const char* witness_field) {
  const nlohmann::json* scope = &doc;
  if (doc.is_object() && doc.contains("report") && doc.at("report").is_object()) {
    const auto& rep = doc.at("report");
    if (rep.contains(key) || rep.contains(witness_field)) scope = &rep;
  }
  if (scope->is_object() && scope->contains(key)) return &scope->at(key);
  return scope;
}

struct SpaceDoc {
  ConvexitySpace space;
  std::optional<std::vector<int>> embedding;
};

SpaceDoc space_doc_from_text(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  const nlohmann::json* inner = unwrap(doc, "space", "convex_sets");
  SpaceDoc out{space_from_json(inner->dump()), std::nullopt};
  const nlohmann::json* scope = &doc;
  if (doc.is_object() && doc.contains("report") && doc.at("report").is_object())
    scope = &doc.at("report");
  if (scope->is_object() && scope->contains("embedding"))
    out.embedding = scope->at("embedding").get<std::vector<int>>();
  return out;
}

// Builtin spec ("interval:9", ...), "@file.json", or "-" for standard input.
SpaceDoc load_space(const std::string& spec, std::istream& in) {
  if (spec.empty()) throw std::invalid_argument("--space is required");
  if (spec == "-") return space_doc_from_text(read_input("-", in));
  if (spec.front() == '@') return space_doc_from_text(read_file(spec.substr(1)));
  return SpaceDoc{parse_space_spec(spec), std::nullopt};
}

Nerve load_nerve(const std::string& path, std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(read_input(path, in));
  const nlohmann::json* inner = unwrap(doc, "nerve", "maximal_families");
  return nerve_from_json(inner->dump());
}

ordered_json js_indices(SubsetMask m) {
  ordered_json arr = ordered_json::array();
  for (int i : mask_indices(m)) arr.push_back(i);
  return arr;
}

ordered_json js_mask_list(const std::vector<SubsetMask>& sets) {
  ordered_json arr = ordered_json::array();
  for (SubsetMask s : sets) arr.push_back(js_indices(s));
  return arr;
}

ordered_json js_family(const UpFamily& f) {
  ordered_json j;
  j["ground_size"] = f.ground_size;
  j["min_sets"] = js_mask_list(f.min_sets);
  return j;
}

int emit(Ctx& c, ordered_json config, ordered_json report, int code) {
  ordered_json env;
  env["tool"] = "convexity";
  env["version"] = kVersion;
  env["command"] = c.command;
  env["config"] = std::move(config);
  env["report"] = std::move(report);
  std::string text = env.dump(2);
  text.push_back('\n');
  if (!c.o.out_path.empty())
    write_file(c.o.out_path, text);
  else
    (*c.out) << text;
  return code;
}

ordered_json space_config(const Ctx& c, std::uint64_t budget) {
  ordered_json cfg;
  cfg["space"] = c.o.space_spec;
  cfg["budget_nodes"] = budget;
  return cfg;
}

// ---------------------------------------------------------------------------
// space

int cmd_space_gen(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  SpaceValidation v = is_valid_space(doc.space);
  ordered_json rep;
  rep["n"] = doc.space.n;
  rep["convex_count"] = doc.space.convex_sets.size();
  rep["valid"] = v.ok;
  if (!v.ok) rep["detail"] = v.detail;
  rep["space"] = ordered_json::parse(space_to_json(doc.space));
  return emit(c, space_config(c, resolve_budget(c.o)), std::move(rep), v.ok ? 0 : 1);
}

int cmd_space_validate(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  SpaceValidation v = is_valid_space(doc.space);
  ordered_json rep;
  rep["n"] = doc.space.n;
  rep["convex_count"] = doc.space.convex_sets.size();
  rep["valid"] = v.ok;
  rep["detail"] = v.detail;
  return emit(c, space_config(c, resolve_budget(c.o)), std::move(rep), v.ok ? 0 : 1);
}

int cmd_space_hull(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  SubsetMask pts = parse_points(c.o.points.empty() ? "all" : c.o.points, doc.space.n);
  SubsetMask h = hull(doc.space, pts);
  ordered_json cfg = space_config(c, resolve_budget(c.o));
  cfg["points"] = js_indices(pts);
  ordered_json rep;
  rep["points"] = js_indices(pts);
  rep["hull"] = js_indices(h);
  rep["hull_hex"] = mask_to_hex(h, doc.space.n);
  return emit(c, std::move(cfg), std::move(rep), 0);
}

// ---------------------------------------------------------------------------
// radon

int cmd_radon_number(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  BudgetCounter budget(resolve_budget(c.o));
  RadonNumberResult rn = radon_number(doc.space, c.o.k, &budget);
  ordered_json cfg = space_config(c, budget.limit);
  cfg["k"] = c.o.k;
  ordered_json rep;
  rep["k"] = rn.k;
  rep["value"] = rn.value;
  rep["attained"] = rn.attained;
  rep["certificate"] = js_indices(rn.certificate);
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_radon_partition(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  BudgetCounter budget(resolve_budget(c.o));
  SubsetMask pts = parse_points(c.o.points.empty() ? "all" : c.o.points, doc.space.n);
  auto part = tverberg_partition(doc.space, pts, c.o.k, &budget);
  ordered_json cfg = space_config(c, budget.limit);
  cfg["k"] = c.o.k;
  cfg["points"] = js_indices(pts);
  ordered_json rep;
  rep["found"] = part.has_value();
  if (part) {
    rep["parts"] = js_mask_list(part->parts);
    rep["witness"] = part->witness;
  }
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_radon_recurrences(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  BudgetCounter budget(resolve_budget(c.o));
  RecurrenceReport rr = check_recurrences(doc.space, c.o.kmax, &budget);
  ordered_json cfg = space_config(c, budget.limit);
  cfg["kmax"] = c.o.kmax;
  ordered_json rep;
  auto& nums = rep["numbers"] = ordered_json::array();
  for (const RadonNumberResult& rn : rr.numbers)
    nums.push_back({{"k", rn.k}, {"value", rn.value}, {"attained", rn.attained}});
  auto& checks = rep["checks"] = ordered_json::array();
  for (const RecurrenceCheck& ch : rr.checks)
    checks.push_back({{"name", ch.name},
                      {"k", ch.lhs_k},
                      {"lhs", ch.lhs},
                      {"rhs", ch.rhs},
                      {"holds", ch.holds}});
  rep["all_hold"] = rr.all_hold;
  return emit(c, std::move(cfg), std::move(rep), rr.all_hold ? 0 : 1);
}

int cmd_radon_centrepoint(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  BudgetCounter budget(resolve_budget(c.o));
  SubsetMask pts = parse_points(c.o.points.empty() ? "all" : c.o.points, doc.space.n);
  CentrepointResult res = centrepoint(doc.space, pts, &budget);
  ordered_json cfg = space_config(c, budget.limit);
  cfg["points"] = js_indices(pts);
  ordered_json rep;
  rep["r2"] = res.r2;
  if (res.point)
    rep["point"] = *res.point;
  else
    rep["point"] = nullptr;
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_radon_epsnet(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  BudgetCounter budget(resolve_budget(c.o));
  SubsetMask pts = parse_points(c.o.points.empty() ? "all" : c.o.points, doc.space.n);
  SubsetMask net = weak_epsilon_net(doc.space, pts, c.o.eps, &budget);
  ordered_json cfg = space_config(c, budget.limit);
  cfg["points"] = js_indices(pts);
  cfg["eps"] = c.o.eps;
  ordered_json rep;
  rep["eps"] = c.o.eps;
  rep["net"] = js_indices(net);
  rep["size"] = popcount(net);
  return emit(c, std::move(cfg), std::move(rep), 0);
}

// ---------------------------------------------------------------------------
// nerve

int cmd_nerve_compute(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  SubsetMask pts;
  if (!c.o.points.empty()) {
    pts = parse_points(c.o.points, doc.space.n);
  } else if (doc.embedding) {
    pts = 0;
    for (int p : *doc.embedding) {
      if (p < 0 || p >= doc.space.n)
        throw std::invalid_argument("embedding index out of range in input document");
      pts |= bit(p);
    }
  } else {
    pts = full_mask(doc.space.n);
  }
  Nerve nv = compute_nerve(doc.space, pts, c.o.lattice_cap);
  ordered_json cfg = space_config(c, resolve_budget(c.o));
  cfg["points"] = js_indices(pts);
  cfg["lattice_cap"] = c.o.lattice_cap;
  ordered_json rep;
  rep["ground_size"] = nv.ground_size;
  rep["maximal_count"] = nv.maximal_families.size();
  rep["nerve"] = ordered_json::parse(nerve_to_json(nv));
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_nerve_check(Ctx& c) {
  Nerve nv = load_nerve(c.o.in_path, *c.in);
  NervePropertyReport pr = check_n_properties(nv);
  bool ok = pr.structure_ok && pr.point_families_ok;
  ordered_json cfg;
  cfg["in"] = c.o.in_path;
  cfg["budget_nodes"] = resolve_budget(c.o);
  ordered_json rep;
  rep["ground_size"] = nv.ground_size;
  rep["maximal_count"] = nv.maximal_families.size();
  rep["structure_ok"] = pr.structure_ok;
  rep["point_families_ok"] = pr.point_families_ok;
  rep["packing_max"] = pr.packing_max;
  if (!ok) rep["detail"] = pr.detail;
  return emit(c, std::move(cfg), std::move(rep), ok ? 0 : 1);
}

int cmd_nerve_tospace(Ctx& c) {
  Nerve nv = load_nerve(c.o.in_path, *c.in);
  EmbeddedSpace es = nerve_to_space(nv, c.o.closure_cap);
  ordered_json cfg;
  cfg["in"] = c.o.in_path;
  cfg["closure_cap"] = c.o.closure_cap;
  cfg["budget_nodes"] = resolve_budget(c.o);
  ordered_json rep;
  rep["point_count"] = es.space.n;
  rep["convex_count"] = es.space.convex_sets.size();
  rep["embedding"] = es.embedding;
  rep["space"] = ordered_json::parse(space_to_json(es.space));
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_nerve_n5(Ctx& c) {
  Nerve nv = load_nerve(c.o.in_path, *c.in);
  BudgetCounter budget(resolve_budget(c.o));
  N5Options opts;
  opts.jobs = c.o.jobs;
  opts.budget = &budget;
  N5Result res = check_n5_abstract(nv, c.o.r, c.o.t, opts);
  ordered_json cfg;
  cfg["in"] = c.o.in_path;
  cfg["r"] = c.o.r;
  cfg["t"] = c.o.t;
  cfg["jobs"] = c.o.jobs;
  cfg["budget_nodes"] = budget.limit;
  ordered_json rep;
  rep["ok"] = res.ok;
  rep["multisets_checked"] = res.multisets_checked;
  if (!res.ok) {
    rep["failing"] = res.failing;
    rep["failing_has_repeats"] = res.failing_has_repeats;
    rep["distinct_ok"] = res.distinct_ok;
  }
  return emit(c, std::move(cfg), std::move(rep), res.ok ? 0 : 1);
}

// ---------------------------------------------------------------------------
// cex

int cmd_cex_build(Ctx& c) {
  Counterexample cex = build_counterexample(c.o.k);
  if (!c.o.emit_nerve.empty()) write_file(c.o.emit_nerve, nerve_to_json(cex.nerve) + "\n");
  ordered_json cfg;
  cfg["k"] = c.o.k;
  cfg["budget_nodes"] = resolve_budget(c.o);
  if (!c.o.emit_nerve.empty()) cfg["emit_nerve"] = c.o.emit_nerve;
  ordered_json rep;
  rep["k"] = cex.k;
  rep["ground_size"] = cex.nerve.ground_size;
  rep["families"] = {{"a", cex.a_count}, {"b", cex.b_count}, {"c", cex.c_count},
                     {"total", cex.nerve.maximal_families.size()}};
  auto& ids = rep["ids"] = ordered_json::array();
  for (const CexFamilyId& id : cex.ids) ids.push_back(cex_id_name(id));
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_cex_verify(Ctx& c) {
  BudgetCounter budget(resolve_budget(c.o));
  CexOptions copts;
  copts.use_symmetry = c.o.symmetry;
  copts.space_crosscheck = c.o.space_crosscheck;
  copts.jobs = c.o.jobs;
  copts.budget = &budget;
  CexReport rep = counterexample_report(c.o.k, copts);
  if (!c.o.emit_nerve.empty())
    write_file(c.o.emit_nerve, nerve_to_json(build_counterexample(c.o.k).nerve) + "\n");
  bool ok = rep.verified;
  if (c.o.space_crosscheck)
    ok = ok && rep.crosscheck && rep.crosscheck->upper_ok && rep.crosscheck->lower_ok;
  ordered_json cfg;
  cfg["k"] = c.o.k;
  cfg["symmetry"] = c.o.symmetry;
  cfg["space_crosscheck"] = c.o.space_crosscheck;
  cfg["jobs"] = c.o.jobs;
  cfg["budget_nodes"] = budget.limit;
  if (!c.o.emit_nerve.empty()) cfg["emit_nerve"] = c.o.emit_nerve;
  return emit(c, std::move(cfg), ordered_json::parse(cex_report_json(rep)), ok ? 0 : 1);
}

// ---------------------------------------------------------------------------
// jamison

int cmd_jamison_system(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  SubsetMask pts = parse_points(c.o.points.empty() ? "all" : c.o.points, doc.space.n);
  JamisonSystem sys = build_jamison_system(doc.space, pts, c.o.lattice_cap);
  ordered_json cfg = space_config(c, resolve_budget(c.o));
  cfg["points"] = js_indices(pts);
  ordered_json rep;
  rep["points"] = sys.pts;
  rep["witnesses"] = sys.witnesses;
  auto& fams = rep["families"] = ordered_json::array();
  for (std::size_t i = 0; i < sys.families.size(); ++i) {
    ordered_json f;
    f["point"] = sys.pts[i];
    f["min_sets"] = js_mask_list(sys.families[i].min_sets);
    fams.push_back(std::move(f));
  }
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_jamison_tverberg(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  SubsetMask pts = parse_points(c.o.points.empty() ? "all" : c.o.points, doc.space.n);
  JamisonSystem sys = build_jamison_system(doc.space, pts, c.o.lattice_cap);
  JamisonTverberg jt = jamison_tverberg(sys, c.o.k);
  ordered_json cfg = space_config(c, resolve_budget(c.o));
  cfg["points"] = js_indices(pts);
  cfg["k"] = c.o.k;
  ordered_json rep;
  rep["k"] = c.o.k;
  auto& parts = rep["parts"] = ordered_json::array();
  for (SubsetMask local : jt.parts) {
    ordered_json part = ordered_json::array();
    for (int i : mask_indices(local)) part.push_back(sys.pts[i]);
    parts.push_back(std::move(part));
  }
  rep["family_index"] = jt.family_index;
  rep["family_point"] = sys.pts[jt.family_index];
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_jamison_selection(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  SubsetMask pts = parse_points(c.o.points.empty() ? "all" : c.o.points, doc.space.n);
  SelectionResult res = selection_statistic(doc.space, pts);
  const std::int64_t m = popcount(pts);
  const std::int64_t pairs = m * (m - 1) / 2;
  const std::int64_t triples = m * (m - 1) * (m - 2) / 6;
  ordered_json cfg = space_config(c, resolve_budget(c.o));
  cfg["points"] = js_indices(pts);
  ordered_json rep;
  rep["best_point"] = res.best_point;
  rep["count"] = res.count;
  rep["pairs"] = pairs;
  rep["triples"] = triples;
  // count * |P| >= C(|P|,3), i.e. count >= C(|P|,3)/|P| without rounding.
  rep["bound_ok"] = res.count * m >= triples;
  return emit(c, std::move(cfg), std::move(rep), 0);
}

// ---------------------------------------------------------------------------
// bounds

int cmd_bounds_shadow(Ctx& c) {
  TupleFamily f = tuple_family_from_text(read_input(c.o.in_path, *c.in));
  TupleFamily sh = shadow(f);
  ordered_json cfg;
  cfg["in"] = c.o.in_path;
  ordered_json rep;
  rep["d"] = f.d;
  rep["r"] = f.r;
  rep["ground_size"] = f.ground_size;
  rep["family_size"] = f.tuples.size();
  rep["shadow_size"] = sh.tuples.size();
  rep["shadow"] = tuple_family_to_text(sh);
  return emit(c, std::move(cfg), std::move(rep), 0);
}

int cmd_bounds_kk(Ctx& c) {
  TupleFamily f = tuple_family_from_text(read_input(c.o.in_path, *c.in));
  KkReport kk = check_kk_bound(f);
  bool ok = kk.slack >= -1e-6;
  ordered_json cfg;
  cfg["in"] = c.o.in_path;
  ordered_json rep;
  rep["d"] = f.d;
  rep["r"] = f.r;
  rep["family_size"] = kk.family_size;
  rep["shadow_size"] = kk.shadow_size;
  rep["x"] = kk.x;
  rep["bound"] = kk.bound;
  rep["slack"] = kk.slack;
  rep["ok"] = ok;
  return emit(c, std::move(cfg), std::move(rep), ok ? 0 : 1);
}

int cmd_bounds_rgood(Ctx& c) {
  BudgetCounter budget(resolve_budget(c.o));
  RBadOptions ro;
  ro.exact_cap = c.o.exact_cap;
  ro.samples = c.o.samples;
  ro.seed = c.o.seed;
  ro.jobs = c.o.jobs;
  RBadReport res = count_r_bad(c.o.ground, c.o.a, c.o.d, c.o.rr, ro, &budget);
  ordered_json cfg;
  cfg["ground"] = c.o.ground;
  cfg["a"] = c.o.a;
  cfg["d"] = c.o.d;
  cfg["r"] = c.o.rr;
  cfg["exact_cap"] = c.o.exact_cap;
  cfg["samples"] = c.o.samples;
  cfg["seed"] = c.o.seed;
  cfg["jobs"] = c.o.jobs;
  cfg["budget_nodes"] = budget.limit;
  ordered_json rep;
  rep["exhaustive"] = res.exhaustive;
  rep["total"] = res.total;
  rep["checked"] = res.checked;
  if (res.exhaustive) {
    rep["bad"] = res.bad;
  } else {
    rep["bad_sampled"] = res.bad;
    rep["bad_estimate"] = res.bad_estimate;
    rep["std_error"] = res.std_error;
  }
  rep["forest_constant"] = labeled_forest_count(c.o.d);
  rep["bound"] = res.bound;
  rep["within_bound"] = res.within_bound;
  return emit(c, std::move(cfg), std::move(rep), res.within_bound ? 0 : 1);
}

int cmd_bounds_turan(Ctx& c) {
  Hypergraph h = hypergraph_from_text(read_input(c.o.in_path, *c.in));
  BudgetCounter budget(resolve_budget(c.o));
  double thr = turan_threshold(h.n, h.s, c.o.l);
  auto found = turan_independent(h, c.o.l, &budget);
  bool below = static_cast<double>(h.edges.size()) < thr;
  ordered_json cfg;
  cfg["in"] = c.o.in_path;
  cfg["l"] = c.o.l;
  cfg["budget_nodes"] = budget.limit;
  ordered_json rep;
  rep["n"] = h.n;
  rep["s"] = h.s;
  rep["edge_count"] = h.edges.size();
  rep["l"] = c.o.l;
  rep["threshold"] = thr;
  rep["below_threshold"] = below;
  if (found)
    rep["independent"] = js_indices(*found);
  else
    rep["independent"] = nullptr;
  // Below the threshold an independent set is guaranteed; missing one there
  // is a property violation.
  bool violated = below && !found.has_value();
  return emit(c, std::move(cfg), std::move(rep), violated ? 1 : 0);
}

int cmd_bounds_indep(Ctx& c) {
  Hypergraph g = hypergraph_from_text(read_input(c.o.in_path, *c.in));
  BudgetCounter budget(resolve_budget(c.o));
  LocalGlobalReport res = local_to_global_independent(g, c.o.s_size, c.o.t_size, &budget);
  bool range_ok = local_global_range_ok(c.o.s_size, c.o.t_size);
  ordered_json cfg;
  cfg["in"] = c.o.in_path;
  cfg["s"] = c.o.s_size;
  cfg["t"] = c.o.t_size;
  cfg["budget_nodes"] = budget.limit;
  ordered_json rep;
  rep["n"] = g.n;
  rep["s"] = c.o.s_size;
  rep["t"] = c.o.t_size;
  rep["range_ok"] = range_ok;
  rep["hypothesis_holds"] = res.hypothesis_holds;
  if (!res.hypothesis_holds)
    rep["failing_subset"] = js_indices(res.failing_subset);
  if (res.independent)
    rep["independent"] = js_indices(*res.independent);
  else
    rep["independent"] = nullptr;
  // Inside the supported range the transfer is a theorem; a hypothesis-
  // satisfying graph with no conclusion would falsify it.
  bool violated = range_ok && res.hypothesis_holds && !res.independent.has_value();
  return emit(c, std::move(cfg), std::move(rep), violated ? 1 : 0);
}

int cmd_bounds_disjoint(Ctx& c) {
  SpaceDoc doc = load_space(c.o.space_spec, *c.in);
  BudgetCounter budget(resolve_budget(c.o));
  SubsetMask pts = parse_points(c.o.points.empty() ? "all" : c.o.points, doc.space.n);
  const bool t_mode = c.o.t >= 0;
  const bool k_mode = c.o.k >= 1;
  if (t_mode == k_mode)
    throw std::invalid_argument("bounds disjoint: pass exactly one of --t (doubling depth) or "
                                "--k (part count)");
  ordered_json cfg = space_config(c, budget.limit);
  cfg["points"] = js_indices(pts);
  ordered_json rep;
  if (t_mode) {
    cfg["t"] = c.o.t;
    DisjointSubsets ds = jamison_disjoint_subsets(doc.space, pts, c.o.t, &budget);
    rep["mode"] = "doubling";
    rep["t"] = c.o.t;
    rep["subset_count"] = ds.subsets.size();
    rep["subsets"] = js_mask_list(ds.subsets);
    rep["containing_point"] = ds.containing_point;
    rep["family"] = js_family(ds.family);
  } else {
    cfg["k"] = c.o.k;
    auto res = find_k_disjoint_common(doc.space, pts, c.o.k, &budget);
    rep["mode"] = "common-family";
    rep["k"] = c.o.k;
    rep["found"] = res.has_value();
    if (res) {
      rep["parts"] = js_mask_list(res->parts);
      rep["containing_point"] = res->containing_point;
      rep["family"] = js_family(res->family);
    }
  }
  return emit(c, std::move(cfg), std::move(rep), 0);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Ctx ctx;
  ctx.in = &in;
  ctx.out = &out;
  ctx.err = &err;
  Opts& o = ctx.o;

  CLI::App app{"finite convexity space toolkit: hulls, Radon/Tverberg numbers, nerves, and "
               "combinatorial bound checks",
               "convexity"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--budget", o.budget,
                    "search budget in nodes (default: CONVEXITY_BUDGET_NODES or built-in)");
    cmd->add_option("--out", o.out_path, "write the JSON report to this file instead of stdout");
    cmd->add_flag("--timings", o.timings, "print wall-clock timing to stderr");
  };
  auto add_space = [&](CLI::App* cmd) {
    cmd->add_option("--space", o.space_spec,
                    "builtin spec (interval:N, singleton:N, free:N, box:AxB[xC..]), @file.json, "
                    "or - for stdin")
        ->required();
  };
  auto leaf = [&](CLI::App* parent, const char* name, const char* desc, auto fn,
                  const char* full) {
    CLI::App* cmd = parent->add_subcommand(name, desc);
    add_common(cmd);
    cmd->callback([&ctx, fn, full] {
      ctx.command = full;
      ctx.exit_code = fn(ctx);
    });
    return cmd;
  };

  // space ---------------------------------------------------------------
  CLI::App* space = app.add_subcommand("space", "generate, validate, and query convexity spaces");
  space->require_subcommand(1);
  add_space(leaf(space, "gen", "emit a space document", cmd_space_gen, "space gen"));
  add_space(
      leaf(space, "validate", "check the space axioms", cmd_space_validate, "space validate"));
  {
    CLI::App* cmd = leaf(space, "hull", "hull of a point set", cmd_space_hull, "space hull");
    add_space(cmd);
    cmd->add_option("--points", o.points, "point indices (comma/space separated) or 'all'");
  }

  // radon -----------------------------------------------------------------
  CLI::App* radon =
      app.add_subcommand("radon", "Radon/Tverberg numbers, partitions, and consequences");
  radon->require_subcommand(1);
  {
    CLI::App* cmd =
        leaf(radon, "number", "k-th Radon number of a space", cmd_radon_number, "radon number");
    add_space(cmd);
    cmd->add_option("--k", o.k, "partition arity")->required();
  }
  {
    CLI::App* cmd = leaf(radon, "partition", "search a k-partition with intersecting hulls",
                         cmd_radon_partition, "radon partition");
    add_space(cmd);
    cmd->add_option("--k", o.k, "part count")->required();
    cmd->add_option("--points", o.points, "point indices or 'all' (default all)");
  }
  {
    CLI::App* cmd = leaf(radon, "recurrences", "exact Radon numbers against their recurrences",
                         cmd_radon_recurrences, "radon recurrences");
    add_space(cmd);
    cmd->add_option("--kmax", o.kmax, "largest k to compute (default 4)");
  }
  {
    CLI::App* cmd = leaf(radon, "centrepoint", "point in every heavy convex set",
                         cmd_radon_centrepoint, "radon centrepoint");
    add_space(cmd);
    cmd->add_option("--points", o.points, "point indices or 'all' (default all)");
  }
  {
    CLI::App* cmd = leaf(radon, "epsnet", "minimum weak epsilon-net", cmd_radon_epsnet,
                         "radon epsnet");
    add_space(cmd);
    cmd->add_option("--eps", o.eps, "density threshold in (0,1]")->required();
    cmd->add_option("--points", o.points, "point indices or 'all' (default all)");
  }

  // nerve -------------------------------------------------------------------
  CLI::App* nerve = app.add_subcommand("nerve", "nerves of point sets and derived spaces");
  nerve->require_subcommand(1);
  {
    CLI::App* cmd = leaf(nerve, "compute", "nerve of a point set in a space", cmd_nerve_compute,
                         "nerve compute");
    add_space(cmd);
    cmd->add_option("--points", o.points,
                    "point indices or 'all' (default: the input document's embedding when "
                    "present, else all)");
    cmd->add_option("--lattice-cap", o.lattice_cap, "dense-lattice size cap");
  }
  {
    CLI::App* cmd = leaf(nerve, "check", "structural nerve properties", cmd_nerve_check,
                         "nerve check");
    cmd->add_option("--in", o.in_path, "nerve document path or - for stdin (default -)");
  }
  {
    CLI::App* cmd = leaf(nerve, "to-space", "materialize the space a nerve induces",
                         cmd_nerve_tospace, "nerve to-space");
    cmd->add_option("--in", o.in_path, "nerve document path or - for stdin (default -)");
    cmd->add_option("--closure-cap", o.closure_cap, "intersection-closure size cap");
  }
  {
    CLI::App* cmd = leaf(nerve, "n5", "exhaustive partition property over family multisets",
                         cmd_nerve_n5, "nerve n5");
    cmd->add_option("--in", o.in_path, "nerve document path or - for stdin (default -)");
    cmd->add_option("--r", o.r, "multiset size")->required();
    cmd->add_option("--t", o.t, "group count")->required();
    cmd->add_option("--jobs", o.jobs, "worker threads (default 1)");
  }

  // cex -----------------------------------------------------------------
  CLI::App* cex =
      app.add_subcommand("cex", "build and verify the small-Radon-number nerve construction");
  cex->require_subcommand(1);
  {
    CLI::App* cmd = leaf(cex, "build", "construct the nerve for a given k", cmd_cex_build,
                         "cex build");
    cmd->add_option("--k", o.k, "target part count (>= 3)")->required();
    cmd->add_option("--emit-nerve", o.emit_nerve, "also write the nerve document to this path");
  }
  {
    CLI::App* cmd = leaf(cex, "verify", "run the full verification suite", cmd_cex_verify,
                         "cex verify");
    cmd->add_option("--k", o.k, "target part count (>= 3)")->required();
    cmd->add_flag("--symmetry", o.symmetry, "reduce the multiset sweep by ground symmetries");
    cmd->add_flag("--space-crosscheck", o.space_crosscheck,
                  "re-verify the Radon bound on the induced space itself");
    cmd->add_option("--jobs", o.jobs, "worker threads (default 1)");
    cmd->add_option("--emit-nerve", o.emit_nerve, "also write the nerve document to this path");
  }

  // jamison ----------------------------------------------------------------
  CLI::App* jam = app.add_subcommand(
      "jamison", "point-family systems and consequences on spaces with second Radon number 3");
  jam->require_subcommand(1);
  {
    CLI::App* cmd = leaf(jam, "system", "build and verify the per-point family system",
                         cmd_jamison_system, "jamison system");
    add_space(cmd);
    cmd->add_option("--points", o.points, "point indices or 'all' (default all)");
  }
  {
    CLI::App* cmd = leaf(jam, "tverberg", "k disjoint parts inside one family",
                         cmd_jamison_tverberg, "jamison tverberg");
    add_space(cmd);
    cmd->add_option("--k", o.k, "part count")->required();
    cmd->add_option("--points", o.points, "point indices or 'all' (default all)");
  }
  {
    CLI::App* cmd = leaf(jam, "selection", "max pair-hull coverage over ground points",
                         cmd_jamison_selection, "jamison selection");
    add_space(cmd);
    cmd->add_option("--points", o.points, "point indices or 'all' (default all)");
  }

  // bounds -----------------------------------------------------------------
  CLI::App* bounds =
      app.add_subcommand("bounds", "shadow, tuple-goodness, and independence bound checks");
  bounds->require_subcommand(1);
  {
    CLI::App* cmd = leaf(bounds, "shadow", "one-deletion shadow of a tuple family",
                         cmd_bounds_shadow, "bounds shadow");
    cmd->add_option("--in", o.in_path, "tuple family text path or - for stdin (default -)");
  }
  {
    CLI::App* cmd = leaf(bounds, "kk", "shadow lower bound check for a tuple family",
                         cmd_bounds_kk, "bounds kk");
    cmd->add_option("--in", o.in_path, "tuple family text path or - for stdin (default -)");
  }
  {
    CLI::App* cmd = leaf(bounds, "rgood", "count tuples lacking r pairwise disjoint coordinates",
                         cmd_bounds_rgood, "bounds rgood");
    cmd->add_option("--ground", o.ground, "ground size")->required();
    cmd->add_option("--a", o.a, "coordinate subset size")->required();
    cmd->add_option("--d", o.d, "tuple dimension")->required();
    cmd->add_option("--r", o.rr, "required disjoint coordinate count")->required();
    cmd->add_option("--exact-cap", o.exact_cap, "max tuple count for exact enumeration");
    cmd->add_option("--samples", o.samples, "sample count past the cap");
    cmd->add_option("--seed", o.seed, "sampling seed (default 1)");
    cmd->add_option("--jobs", o.jobs, "worker threads for the exact sweep (default 1)");
  }
  {
    CLI::App* cmd = leaf(bounds, "turan", "independent set under the edge-count threshold",
                         cmd_bounds_turan, "bounds turan");
    cmd->add_option("--in", o.in_path, "hypergraph text path or - for stdin (default -)");
    cmd->add_option("--l", o.l, "independent set size")->required();
  }
  {
    CLI::App* cmd = leaf(bounds, "indep", "local-to-global independence transfer on a graph",
                         cmd_bounds_indep, "bounds indep");
    cmd->add_option("--in", o.in_path, "graph text path or - for stdin (default -)");
    cmd->add_option("--s", o.s_size, "local window size")->required();
    cmd->add_option("--t", o.t_size, "local independent size")->required();
  }
  {
    CLI::App* cmd = leaf(bounds, "disjoint", "disjoint subsets lying in one nerve family",
                         cmd_bounds_disjoint, "bounds disjoint");
    add_space(cmd);
    cmd->add_option("--points", o.points, "point indices or 'all' (default all)");
    cmd->add_option("--t", o.t, "doubling depth (yields 2^t subsets)");
    cmd->add_option("--k", o.k, "part count for the common-family search");
  }

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("convexity");
  for (const std::string& a : args) argv.push_back(a.c_str());

  const auto t0 = std::chrono::steady_clock::now();
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const budget_error& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const property_violation& e) {
    err << "property violation: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  if (ctx.o.timings) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    char line[128];
    std::snprintf(line, sizeof line, "timing: %s %.3fs\n",
                  ctx.command.empty() ? "(none)" : ctx.command.c_str(), dt.count());
    err << line;
  }
  return ctx.exit_code;
}

}  // namespace cvx
