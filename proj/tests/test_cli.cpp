#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ucauchy/badsquares.hpp"
#include "ucauchy/cli.hpp"

using namespace ucauchy;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("ucauchy_cli_" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("generate writes the segment fixture") {
  const auto dir = scratch("gen");
  const auto r = call({"--out-dir", dir.string(), "generate", "--fixture", "segment", "--density", "1", "--len", "100", "--mesh", "0.01"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["points"] == 10000);
  const std::string csv = slurp(dir / "points.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10001);

  // the CSV reads back as the same measure
  const auto again = call({"--out-dir", dir.string(), "analyze", "--fixture", "file", "--input", (dir / "points.csv").string(), "--mesh", "0.01"});
  const auto direct = call({"--out-dir", dir.string(), "analyze", "--fixture", "segment", "--len", "100", "--mesh", "0.01"});
  REQUIRE(again.code == 0);
  REQUIRE(direct.code == 0);
  const json a = json::parse(again.out), b = json::parse(direct.out);
  CHECK(a["niceness"] == b["niceness"]);
  CHECK(a["ad_constant"] == b["ad_constant"]);
  CHECK(a["tail_violations"] == 0);
}

TEST_CASE("badsquares report equals the library call") {
  const auto dir = scratch("bad");
  const auto r = call({"--out-dir", dir.string(), "badsquares", "--fixture", "cantor", "--n", "4", "--tau", "0.03125", "--depth", "4", "--P", "4,0,0"});
  REQUIRE(r.code == 0);
  const Square p = Square::dyadic(4, 0, 0);
  const double lib = carleson_norm(bad_family(gen_cantor(4), p, 0.03125, 4), p);
  CHECK(json::parse(r.out)["carleson_norm"].get<double>() == lib);
  CHECK(json::parse(slurp(dir / "badsquares.json")) == json::parse(r.out));

  // the unit square is too small for depth 4 at this mesh
  const auto floor = call({"--out-dir", dir.string(), "badsquares", "--fixture", "cantor", "--n", "4", "--tau", "0.03125", "--depth", "4"});
  CHECK(floor.code == 2);
  CHECK(json::parse(floor.err)["error"] == "config");
}

TEST_CASE("re-running gives byte-identical reports") {
  const std::vector<std::vector<std::string>> commands{
      {"curve", "--fixture", "gap", "--len", "2", "--x0", "-0.5", "--y", "0.37", "--mesh", "0.000244140625", "--tau", "0.03125", "--l0", "0.015625"},
      {"riesz", "--fixture", "segment", "--len", "14", "--x0", "-3", "--y", "2.63", "--mesh", "0.01", "--P", "3,0,0", "--depth", "3", "--psi-count", "4", "--f-candidates", "2"},
      {"cauchy", "--fixture", "segment", "--len", "20", "--mesh", "0.02", "--z0", "0,2", "--window", "0,0,1"},
  };
  for (const auto& cmd : commands) {
    std::vector<std::string> files;
    std::vector<std::string> reports;
    for (int run_no = 0; run_no < 2; ++run_no) {
      const auto dir = scratch("det" + std::to_string(run_no));
      std::vector<std::string> args{"--out-dir", dir.string(), "--seed", "7", "--emit-plot-data"};
      args.insert(args.end(), cmd.begin(), cmd.end());
      const auto r = call(args);
      CHECK_MESSAGE(r.code == 0, r.err);
      reports.push_back(r.out);
      std::string all;
      for (const auto& e : std::filesystem::directory_iterator(dir)) all += e.path().filename().string() + slurp(e.path());
      files.push_back(all);
    }
    CHECK(reports[0] == reports[1]);
    CHECK(files[0] == files[1]);
  }
}

TEST_CASE("curve report matches the ledger identities") {
  const auto dir = scratch("curve");
  const auto r = call({"--out-dir", dir.string(), "curve", "--fixture", "gap", "--len", "2", "--x0", "-0.5", "--y", "0.37",
                       "--mesh", "0.000244140625", "--l0", "0.03125"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["components_meeting_3P"] == 1);
  CHECK(j["walk"]["lip_constant"] == j["walk"]["length"]);
  const json g = json::parse(slurp(dir / "graph.json"));
  CHECK(g["edges"].size() == j["edge_count"]);
  double sum = 0.0;
  for (const auto& e : g["edges"]) sum += e["length"].get<double>();
  CHECK(sum == doctest::Approx(j["ledger"]["total"].get<double>()).epsilon(1e-12));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(call({}).code == 2);
  CHECK(call({"--out-dir", dir.string(), "frobnicate"}).code == 2);
  CHECK(call({"--out-dir", dir.string(), "generate", "--fixture", "segment", "--mesh", "-1"}).code == 2);
  CHECK(call({"--out-dir", dir.string(), "curve", "--fixture", "segment", "--len", "2", "--l0", "0.3"}).code == 2);
  CHECK(call({"--out-dir", dir.string(), "--threads", "0", "generate"}).code == 2);
  CHECK(call({"--help"}).code == 0);
  // a two-point measure has no stable kappa: numerical flag
  const auto r = call({"--out-dir", dir.string(), "cauchy", "--fixture", "gap", "--len", "2", "--x0", "-1", "--mesh", "0.01",
                       "--gap-lo", "-0.2", "--gap-hi", "0.9", "--skip-norm", "--window", "-0.2,0,0.4"});
  MESSAGE("kappa on a broken window: exit " << r.code << " " << r.err);
  CHECK(r.code == 3);

  // environment variable picks the output directory
  const auto env_dir = scratch("env");
  setenv("UCAUCHY_OUT_DIR", env_dir.string().c_str(), 1);
  CHECK(call({"generate", "--fixture", "cantor", "--n", "2"}).code == 0);
  unsetenv("UCAUCHY_OUT_DIR");
  CHECK(std::filesystem::exists(env_dir / "points.csv"));
}
