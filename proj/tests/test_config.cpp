#include <catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lrlab/config.hpp"

using namespace lrlab;
namespace fs = std::filesystem;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json sharpness_config() {
  return json{{"graph", {{"kind", "chain"}, {"L", 8}}},
              {"model",
               {{"name", "zz_set_protocol"},
                {"X", {0, 1}},
                {"Y", {5, 6}},
                {"alpha", 1.0},
                {"C", 1.0}}},
              {"experiment", "sharpness"},
              {"grids", {{"t", {0.001, 0.25, 1.0}}}},
              {"output", {{"path", "sharp.csv"}, {"format", "csv"}}}};
}
}  // namespace

TEST_CASE("report serialization") {
  SweepReport rep;
  rep.rows.push_back(make_row({{"t", 0.5}, {"r", 2.0}}, 0.25, 0.5));
  rep.rows.push_back(make_row({{"t", 1.0}, {"r", 2.0}}, 0.7, 0.6));
  rep.finalize();
  REQUIRE(rep.violations == 1);
  REQUIRE(rep.min_slack == Catch::Approx(-0.1).epsilon(1e-12));

  std::string csv = to_csv(rep);
  REQUIRE(csv.rfind("t,r,lhs,rhs,slack,pass\n", 0) == 0);
  REQUIRE(csv.find("\r") == std::string::npos);
  REQUIRE(csv.find(",false\n") != std::string::npos);

  json j = to_json(rep);
  REQUIRE(j["rows"].size() == 2);
  REQUIRE(j["min_slack"].get<double>() == rep.min_slack);

  SweepReport empty;
  REQUIRE(to_csv(empty) == "lhs,rhs,slack,pass\n");
}

TEST_CASE("doubles round-trip through the CSV format") {
  double x = 0.1 + 0.2;
  std::string s = fmt_double(x);
  REQUIRE(std::stod(s) == x);
  REQUIRE(fmt_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("run_config executes the sharpness default") {
  fs::path dir = fs::temp_directory_path() / "lrlab_cfg_test";
  fs::remove_all(dir);
  RunResult res = run_config(sharpness_config(), dir.string(), 1);
  REQUIRE(res.report.violations == 0);
  std::string csv = slurp(res.csv_path);
  REQUIRE(csv.rfind("t,side,ratio,lhs,rhs,slack,pass\n", 0) == 0);

  json summary = json::parse(slurp(res.summary_path));
  REQUIRE(summary["violations"].get<int>() == 0);
  REQUIRE(summary["min_slack"].get<double>() == res.report.min_slack);
  REQUIRE(summary.contains("wall_time_seconds"));
  REQUIRE(summary["config"]["experiment"] == "sharpness");
  fs::remove_all(dir);
}

TEST_CASE("csv output is byte-identical across thread counts") {
  fs::path d1 = fs::temp_directory_path() / "lrlab_det_1";
  fs::path d4 = fs::temp_directory_path() / "lrlab_det_4";
  fs::remove_all(d1);
  fs::remove_all(d4);
  RunResult r1 = run_config(sharpness_config(), d1.string(), 1);
  RunResult r4 = run_config(sharpness_config(), d4.string(), 4);
  REQUIRE(slurp(r1.csv_path) == slurp(r4.csv_path));
  fs::remove_all(d1);
  fs::remove_all(d4);
}

TEST_CASE("config validation diagnostics") {
  json cfg = sharpness_config();
  cfg["model"]["Y"] = {1, 5};
  REQUIRE_THROWS_WITH(run_config(cfg, ".", 1), Catch::Matchers::ContainsSubstring("X and Y"));

  json nogrid = sharpness_config();
  nogrid["grids"].erase("t");
  REQUIRE_THROWS_WITH(run_config(nogrid, ".", 1), Catch::Matchers::ContainsSubstring("grids.t"));

  json badexp = sharpness_config();
  badexp["experiment"] = "warp";
  REQUIRE_THROWS_WITH(run_config(badexp, ".", 1), Catch::Matchers::ContainsSubstring("experiment"));

  json badkind = sharpness_config();
  badkind["graph"]["kind"] = "moebius";
  REQUIRE_THROWS_WITH(run_config(badkind, ".", 1), Catch::Matchers::ContainsSubstring("graph.kind"));
}

TEST_CASE("custom term lists") {
  SiteGraph chain = build_graph({GraphKind::Chain, 1, 4, 2});
  json doc = {{"terms",
               {{{"support", {0, 1}},
                 {"matrix",
                  {{1, 0}, {0, 0}, {0, 0}, {0, 0},
                   {0, 0}, {-1, 0}, {0, 0}, {0, 0},
                   {0, 0}, {0, 0}, {-1, 0}, {0, 0},
                   {0, 0}, {0, 0}, {0, 0}, {1, 0}}}}}}};
  Interaction psi = parse_custom_terms(chain, doc);
  REQUIRE(psi.terms.size() == 1);
  LocalOp zz = dense_from_pauli(make_pauli_string({{0, 'Z'}, {1, 'Z'}}));
  REQUIRE(op_distance(psi.terms[0].op, zz) <= 1e-15);

  json bad = doc;
  bad["terms"][0]["matrix"][1] = {0, 1};  // breaks Hermiticity
  REQUIRE_THROWS_WITH(parse_custom_terms(chain, bad),
                      Catch::Matchers::ContainsSubstring("Hermitian"));

  json outside = doc;
  outside["terms"][0]["support"] = {0, 9};
  REQUIRE_THROWS_WITH(parse_custom_terms(chain, outside),
                      Catch::Matchers::ContainsSubstring("outside"));
}

TEST_CASE("dimension cap error names the required size") {
  json cfg = {{"graph", {{"kind", "chain"}, {"L", 40}}},
              {"model", {{"name", "zz_long_range"}, {"profile", {{"type", "power"}, {"alpha", 2.0}}}}},
              {"experiment", "lrb_sweep"},
              {"grids", {{"t", {1.0}}}}};
  REQUIRE_THROWS_WITH(run_config(cfg, ".", 1),
                      Catch::Matchers::ContainsSubstring("dimension cap"));
}

TEST_CASE("experiment listing") {
  const auto& names = experiment_names();
  REQUIRE(std::find(names.begin(), names.end(), "sharpness") != names.end());
  REQUIRE(std::find(names.begin(), names.end(), "lppl") != names.end());
}
