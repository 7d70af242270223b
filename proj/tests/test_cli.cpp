#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cvx/cli.hpp"
#include "cvx/nerve.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = cvx::run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

json report(const CliResult& r) {
  json env = json::parse(r.out);
  REQUIRE(env.at("tool") == "convexity");
  REQUIRE(env.contains("version"));
  REQUIRE(env.contains("command"));
  REQUIRE(env.contains("config"));
  return env.at("report");
}

// Restores an environment variable on scope exit.
struct EnvGuard {
  std::string name;
  std::string old;
  bool had = false;
  EnvGuard(const std::string& n, const char* value) : name(n) {
    if (const char* prev = std::getenv(n.c_str())) {
      had = true;
      old = prev;
    }
    if (value)
      ::setenv(n.c_str(), value, 1);
    else
      ::unsetenv(n.c_str());
  }
  ~EnvGuard() {
    if (had)
      ::setenv(name.c_str(), old.c_str(), 1);
    else
      ::unsetenv(name.c_str());
  }
};

}  // namespace

TEST_CASE("usage errors exit 2 with a diagnostic") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"radon"}).code == 2);  // subcommand required

  CliResult missing = run({"radon", "number", "--space", "interval:9"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--k") != std::string::npos);

  CliResult badspace = run({"radon", "number", "--space", "nosuch:4", "--k", "2"});
  CHECK(badspace.code == 2);
  CHECK(badspace.err.find("nosuch") != std::string::npos);

  CliResult badpoints = run({"space", "hull", "--space", "interval:5", "--points", "0,9"});
  CHECK(badpoints.code == 2);
  CHECK(badpoints.err.find("out of range") != std::string::npos);

  CHECK(run({"space", "validate", "--space", "-"}, "not json").code == 2);
  CHECK(run({"radon", "number", "--space", "@/no/such/file.json", "--k", "2"}).code == 2);

  // bounds disjoint needs exactly one mode flag.
  CHECK(run({"bounds", "disjoint", "--space", "interval:9"}).code == 2);
  CHECK(run({"bounds", "disjoint", "--space", "interval:9", "--t", "1", "--k", "2"}).code == 2);

  // Malformed line-oriented inputs carry line diagnostics.
  CliResult badfam = run({"bounds", "kk"}, "1 2 5\n0\n");
  CHECK(badfam.code == 2);
  CHECK(badfam.err.find("line 2") != std::string::npos);

  // The partition-property sweep needs r >= t >= 2.
  CliResult badn5 =
      run({"nerve", "n5", "--r", "2", "--t", "3"},
          "{\"ground_size\":2,\"maximal_families\":[[\"1\"],[\"2\"]]}");
  CHECK(badn5.code == 2);
}

TEST_CASE("happy path reports carry the envelope and exact values") {
  CliResult r = run({"radon", "number", "--space", "interval:9", "--k", "4"});
  REQUIRE(r.code == 0);
  json env = json::parse(r.out);
  CHECK(env.at("version") == "0.1.0");
  CHECK(env.at("command") == "radon number");
  CHECK(env.at("config").at("space") == "interval:9");
  json rep = env.at("report");
  CHECK(rep.at("value") == 7);
  CHECK(rep.at("attained") == true);
  CHECK(rep.at("certificate").size() == 6);

  CliResult hull = run({"space", "hull", "--space", "box:3x3", "--points", "0,8"});
  REQUIRE(hull.code == 0);
  CHECK(report(hull).at("hull") == json::parse("[0,1,2,3,4,5,6,7,8]"));

  CliResult ver = run({"--version"});
  CHECK(ver.code == 0);
  CHECK(ver.out == "0.1.0\n");

  CliResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("bounds") != std::string::npos);
}

TEST_CASE("property violations exit 1 and keep the report as certificate") {
  // A nerve missing a point family fails the structural check.
  CliResult check =
      run({"nerve", "check"}, "{\"ground_size\":2,\"maximal_families\":[[\"1\"]]}");
  CHECK(check.code == 1);
  json rep = report(check);
  CHECK(rep.at("structure_ok") == true);
  CHECK(rep.at("point_families_ok") == false);

  // Two disjoint singleton families admit no two-group merge, so the
  // partition-property sweep fails with the offending multiset.
  CliResult n5 = run({"nerve", "n5", "--r", "2", "--t", "2"},
                     "{\"ground_size\":2,\"maximal_families\":[[\"1\"],[\"2\"]]}");
  CHECK(n5.code == 1);
  json nrep = report(n5);
  CHECK(nrep.at("ok") == false);
  CHECK(nrep.at("failing") == json::parse("[0,1]"));
  CHECK(nrep.at("failing_has_repeats") == false);
}

TEST_CASE("budget exhaustion exits 3, flag overrides environment") {
  CliResult tiny = run({"radon", "number", "--space", "interval:9", "--k", "3", "--budget", "500"});
  CHECK(tiny.code == 3);
  CHECK(tiny.err.find("budget") != std::string::npos);

  {
    EnvGuard guard("CONVEXITY_BUDGET_NODES", "500");
    CHECK(run({"radon", "number", "--space", "interval:9", "--k", "3"}).code == 3);
    // An explicit flag wins over the environment.
    CHECK(run({"radon", "number", "--space", "interval:9", "--k", "3", "--budget", "100000000"})
              .code == 0);
  }
  {
    EnvGuard guard("CONVEXITY_BUDGET_NODES", "bogus");
    CliResult bad = run({"radon", "number", "--space", "interval:9", "--k", "3"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("CONVEXITY_BUDGET_NODES") != std::string::npos);
  }
  {
    EnvGuard guard("CONVEXITY_BUDGET_NODES", nullptr);
    CHECK(run({"radon", "number", "--space", "interval:9", "--k", "3"}).code == 0);
  }
}

TEST_CASE("identical invocations produce byte-identical reports") {
  const std::vector<std::string> cmds[] = {
      {"radon", "recurrences", "--space", "box:3x3", "--kmax", "3"},
      {"bounds", "rgood", "--ground", "6", "--a", "2", "--d", "3", "--r", "2"},
      {"bounds", "rgood", "--ground", "6", "--a", "2", "--d", "3", "--r", "2", "--exact-cap",
       "10", "--samples", "2000", "--seed", "7"},
      {"jamison", "tverberg", "--space", "interval:7", "--k", "4"},
  };
  for (const auto& cmd : cmds) {
    CliResult a = run(cmd);
    CliResult b = run(cmd);
    REQUIRE(a.code == 0);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }

  // Worker count changes only the recorded configuration, never the findings.
  CliResult seq = run({"bounds", "rgood", "--ground", "8", "--a", "2", "--d", "3", "--r", "2"});
  CliResult par = run(
      {"bounds", "rgood", "--ground", "8", "--a", "2", "--d", "3", "--r", "2", "--jobs", "4"});
  REQUIRE(seq.code == 0);
  REQUIRE(par.code == 0);
  CHECK(report(seq) == report(par));
  CHECK(report(seq).at("bad") == 3052);
}

TEST_CASE("documents flow between subcommands") {
  // space gen output feeds any --space consumer through stdin.
  CliResult gen = run({"space", "gen", "--space", "interval:5"});
  REQUIRE(gen.code == 0);
  CliResult rn = run({"radon", "number", "--space", "-", "--k", "2"}, gen.out);
  REQUIRE(rn.code == 0);
  CHECK(report(rn).at("value") == 3);

  // nerve compute -> nerve check through stdin.
  CliResult nv = run({"nerve", "compute", "--space", "box:2x3"});
  REQUIRE(nv.code == 0);
  CliResult chk = run({"nerve", "check"}, nv.out);
  CHECK(chk.code == 0);
  CHECK(report(chk).at("structure_ok") == true);
  CHECK(report(chk).at("point_families_ok") == true);

  // The full roundtrip: to-space re-embeds the points and compute reproduces
  // the source nerve exactly (the embedding travels in the document).
  CliResult tospace = run({"nerve", "to-space"}, nv.out);
  REQUIRE(tospace.code == 0);
  CliResult recompute = run({"nerve", "compute", "--space", "-"}, tospace.out);
  REQUIRE(recompute.code == 0);
  CHECK(report(recompute).at("nerve") == report(nv).at("nerve"));
}

TEST_CASE("reports can be written to a file instead of stdout") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "cvx_cli_out_test.json";
  CliResult direct = run({"space", "hull", "--space", "interval:5", "--points", "1,3"});
  CliResult filed =
      run({"space", "hull", "--space", "interval:5", "--points", "1,3", "--out", path.string()});
  REQUIRE(filed.code == 0);
  CHECK(filed.out.empty());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str() == direct.out);
  fs::remove(path);

  CHECK(run({"space", "hull", "--space", "interval:5", "--out", "/no/such/dir/x.json"}).code ==
        2);
}

TEST_CASE("line-oriented inputs work over stdin") {
  CliResult kk = run({"bounds", "kk"}, "1 2 5\n0 1\n2 3\n0 4\n");
  REQUIRE(kk.code == 0);
  json rep = report(kk);
  CHECK(rep.at("ok") == true);
  CHECK(rep.at("family_size") == 3);
  CHECK(rep.at("shadow_size") == 5);

  CliResult sh = run({"bounds", "shadow"}, "2 2 5\n0 1 | 2 3\n");
  REQUIRE(sh.code == 0);
  CHECK(report(sh).at("shadow_size") == 4);

  CliResult turan = run({"bounds", "turan", "--l", "3"}, "6 2\n0 1\n2 3\n4 5\n");
  REQUIRE(turan.code == 0);
  json trep = report(turan);
  CHECK(trep.at("below_threshold") == true);
  CHECK(trep.at("independent") == json::parse("[0,2,4]"));

  CliResult indep = run({"bounds", "indep", "--s", "5", "--t", "4"}, "8 2\n0 1\n");
  REQUIRE(indep.code == 0);
  json irep = report(indep);
  CHECK(irep.at("range_ok") == true);
  CHECK(irep.at("hypothesis_holds") == true);
  CHECK(irep.at("independent").size() == 4);
}

TEST_CASE("construction subcommand emits counts, names, and the nerve document") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "cvx_cli_nerve_test.json";
  CliResult build = run({"cex", "build", "--k", "3", "--emit-nerve", path.string()});
  REQUIRE(build.code == 0);
  json rep = report(build);
  CHECK(rep.at("ground_size") == 7);
  CHECK(rep.at("families").at("a") == 7);
  CHECK(rep.at("families").at("b") == 105);
  CHECK(rep.at("families").at("c") == 21);
  CHECK(rep.at("families").at("total") == 133);
  CHECK(rep.at("ids").size() == 133);
  CHECK(rep.at("ids")[0] == "A[0]");

  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  cvx::Nerve nv = cvx::nerve_from_json(buf.str());
  CHECK(nv.ground_size == 7);
  CHECK(nv.maximal_families.size() == 133);
  fs::remove(path);

  // The emitted document is directly consumable.
  CliResult chk = run({"nerve", "check"}, buf.str());
  CHECK(chk.code == 0);
  CHECK(report(chk).at("packing_max") == 2);
}

TEST_CASE("timing lines go to stderr only") {
  CliResult r = run({"space", "hull", "--space", "interval:5", "--timings"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("timing: space hull") != std::string::npos);
  CHECK(json::parse(r.out).is_object());  // stdout stays pure JSON
  CHECK(r.out.find("timing") == std::string::npos);
}

TEST_CASE("disjoint-subset searches are reachable from the command line") {
  CliResult doubling = run({"bounds", "disjoint", "--space", "interval:9", "--t", "2"});
  REQUIRE(doubling.code == 0);
  json drep = report(doubling);
  CHECK(drep.at("mode") == "doubling");
  CHECK(drep.at("subsets") == json::parse("[[0,2,6,8],[1,7],[3,5],[4]]"));
  CHECK(drep.at("containing_point") == 4);

  CliResult common = run({"bounds", "disjoint", "--space", "singleton:9", "--k", "4"});
  REQUIRE(common.code == 0);
  json crep = report(common);
  CHECK(crep.at("found") == true);
  CHECK(crep.at("parts") == json::parse("[[0,1,2,3],[4,5],[6,7],[8]]"));

  // Absence of a partition is a successful (exit 0) finding.
  CliResult none = run({"bounds", "disjoint", "--space", "interval:6", "--k", "4"});
  REQUIRE(none.code == 0);
  CHECK(report(none).at("found") == false);
}
