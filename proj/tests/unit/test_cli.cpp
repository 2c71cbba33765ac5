#include "dcl/cli.hpp"
#include "dcl/report.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace dcl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dcl-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DCL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::pair<std::string, Setting>> flag(const std::string& k, const std::string& v) {
  return {{k, {v, "--" + k}}};
}

}  // namespace

TEST_CASE("config text parsing") {
  const auto s = parse_config_text("# comment\ncoeff = \"power_law:2\"  # trailing\nlevels = [8, 16, 32]\n", "t.toml");
  REQUIRE(s.size() == 2);
  CHECK(s[0].first == "coeff");
  CHECK(s[1].second.origin == "t.toml:3");
  CHECK_THROWS_WITH_AS(parse_config_text("bogus = 1\n", "x"), doctest::Contains("x:1"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("coeff = \"a\"\ncoeff = \"b\"\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("levels [1]\n", "x"), ConfigError);
}

TEST_CASE("flags override file settings, which override defaults") {
  const auto file = parse_config_text("coeff = \"power_law:2\"\nlevels = [8, 16, 32]\nomega = \"(0,inf)\"\n", "f");
  const RunConfig c = build_config(Subcommand::capacity, file, flag("levels", "16,32,64"));
  CHECK(c.spec.coefficient.tag() == "power_law:2");
  CHECK(c.spec.levels == std::vector<int>{16, 32, 64});
  CHECK(c.spec.region.omega == OpenSet::parse("(0,inf)"));
  CHECK(c.thresholds.tol_capacity == 1e-10);
}

TEST_CASE("scenario selection is applied before overrides") {
  const RunConfig c = build_config(Subcommand::verify, {}, {{"levels", {"32,64,128", "--levels"}},
                                                             {"scenario", {"pow2-half", "--scenario"}}});
  CHECK(c.spec.id == "pow2-half");
  CHECK(c.spec.levels == std::vector<int>{32, 64, 128});
}

TEST_CASE("invalid configurations raise ConfigError") {
  CHECK_THROWS_AS(build_config(Subcommand::capacity, {}, flag("levels", "64,32,16")), ConfigError);
  CHECK_THROWS_AS(build_config(Subcommand::capacity, {}, flag("coeff", "constant:-2")), ConfigError);
  CHECK_THROWS_AS(build_config(Subcommand::capacity, {}, flag("format", "xml")), ConfigError);
  CHECK_THROWS_AS(build_config(Subcommand::verify, {}, flag("scenario", "no-such")), ConfigError);
  CHECK_THROWS_AS(build_config(Subcommand::capacity, {}, flag("tol_capacity", "-1")), ConfigError);
}

TEST_CASE("scenario files round trip through the config parser") {
  for (const Scenario& s : scenario_catalog()) {
    const RunConfig c = build_config(Subcommand::capacity, parse_config_text(scenario_to_config(s), s.id), {});
    CHECK(c.spec.id == s.id);
    CHECK(c.spec.coefficient.tag() == s.coefficient.tag());
    CHECK(c.spec.region.omega == s.region.omega);
    CHECK(c.spec.region.target == s.region.target);
    CHECK(c.spec.levels == s.levels);
    CHECK(c.spec.times == s.times);
    CHECK(c.spec.expect_capacity_zero == s.expect_capacity_zero);
  }
}

TEST_CASE("shipped scenario files match the catalog") {
  for (const Scenario& s : scenario_catalog()) {
    const fs::path p = fs::path(DCL_SOURCE_DIR) / "data" / "scenarios" / (s.id + ".toml");
    REQUIRE(fs::exists(p));
    CHECK(slurp(p) == scenario_to_config(s));
  }
}

TEST_CASE("capacity run writes table and plot data") {
  RunConfig c = build_config(Subcommand::capacity, {},
                             {{"coeff", {"power_law:2", "--coeff"}}, {"omega", {"(0,inf)", "--omega"}},
                              {"target", {"{0}", "--target"}}, {"levels", {"256,512,1024", "--levels"}}});
  c.out_dir = scratch("capacity").string();
  std::ostringstream out;
  CHECK(run(c, out) == exit_ok);
  const std::string csv = slurp(fs::path(c.out_dir) / "capacity.csv");
  CHECK(csv.rfind("mesh_level,h,neighborhood_index,epsilon,value,extrapolated,verdict\n", 0) == 0);
  CHECK(csv.find(",zero\n") != std::string::npos);
  const Json j = Json::parse(slurp(fs::path(c.out_dir) / "capacity.json"));
  CHECK(j["result"]["verdict"] == "zero");
  CHECK(fs::exists(fs::path(c.out_dir) / "capacity_plot.dat"));
}

TEST_CASE("format selection limits the artifacts") {
  RunConfig c = build_config(Subcommand::catalog, {}, flag("format", "json"));
  c.out_dir = scratch("format").string();
  std::ostringstream out;
  CHECK(run(c, out) == exit_ok);
  CHECK(fs::exists(fs::path(c.out_dir) / "catalog.json"));
  CHECK(!fs::exists(fs::path(c.out_dir) / "catalog.csv"));
  CHECK(out.str().find("pow2-half") != std::string::npos);
}

TEST_CASE("evolve writes traces and defect records") {
  RunConfig c = build_config(Subcommand::evolve, {},
                             {{"omega", {"(0,inf)", "--omega"}}, {"levels", {"32", "--levels"}},
                              {"times", {"0.01,0.1", "--times"}}, {"operator", {"neumann", "--operator"}}});
  c.out_dir = scratch("evolve").string();
  std::ostringstream out;
  CHECK(run(c, out) == exit_ok);
  const std::string trace = slurp(fs::path(c.out_dir) / "evolve_trace.csv");
  CHECK(trace.rfind("t,node,x,value\n", 0) == 0);
  const Json j = Json::parse(slurp(fs::path(c.out_dir) / "evolve_defects.json"));
  REQUIRE(j.is_array());
  CHECK(j[0].contains("scenario"));
  CHECK(j[0].contains("defect"));
}

TEST_CASE("sweep exit codes") {
  RunConfig c = build_config(Subcommand::sweep, {},
                             {{"coeff", {"power_law:2", "--coeff"}}, {"omega", {"(0,inf)", "--omega"}},
                              {"target", {"{0}", "--target"}}, {"levels", {"256,512,1024", "--levels"}},
                              {"expect_capacity_zero", {"false", "--expect-capacity-zero"}}});
  c.out_dir = scratch("sweep").string();
  std::ostringstream out;
  CHECK(run(c, out) == exit_failure);
}

TEST_CASE("verify on a catalog scenario") {
  RunConfig c = build_config(Subcommand::verify, {},
                             {{"scenario", {"laplace-half", "--scenario"}}, {"levels", {"64,128,256", "--levels"}}});
  c.out_dir = scratch("verify").string();
  std::ostringstream out;
  CHECK(run(c, out) == exit_ok);
  const Json j = Json::parse(slurp(fs::path(c.out_dir) / "verify.json"));
  CHECK(j.size() == 2);
  CHECK(fs::exists(fs::path(c.out_dir) / "verify.csv"));
}

TEST_CASE("command line exit codes") {
  const std::string out = scratch("cli").string();
  CHECK(run_cli("catalog --out " + out) == exit_ok);
  CHECK(run_cli("catalog --export " + out + "/scen --out " + out) == exit_ok);
  CHECK(fs::exists(fs::path(out) / "scen" / "pow2-half.toml"));
  CHECK(run_cli("capacity --levels 64,32 --out " + out) == exit_config);
  CHECK(run_cli("frobnicate") == exit_config);
  CHECK(run_cli("verify --scenario nope --out " + out) == exit_config);
  CHECK(run_cli("capacity --config /nonexistent/file.toml --out " + out) == exit_config);
  CHECK(run_cli("catalog --out /proc/forbidden") == exit_io);
  CHECK(run_cli("--help") == exit_ok);
}
