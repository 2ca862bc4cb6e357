#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "inflow/errors.hpp"
#include "inflow/harness.hpp"

using namespace inflow;

TEST_CASE("reports are reproducible apart from the timestamp") {
  nlohmann::json cfg = {{"preset", "flush-test"}, {"grid_n", 64}, {"time_samples", 10}};
  SolveReport a = run_experiment("transport1d", cfg, 7);
  SolveReport b = run_experiment("transport1d", cfg, 7);
  nlohmann::json ja = a.to_json(), jb = b.to_json();
  ja["meta"].erase("timestamp");
  jb["meta"].erase("timestamp");
  CHECK(ja.dump() == jb.dump());
  CHECK(a.all_pass());
}

TEST_CASE("flush-test preset passes its verdicts") {
  nlohmann::json cfg = {{"preset", "flush-test"}, {"grid_n", 128}, {"time_samples", 20}};
  SolveReport rep = run_experiment("transport1d", cfg, 0);
  bool saw_flush = false;
  for (const auto& v : rep.verdicts)
    if (v["id"] == "finite_flush") {
      saw_flush = true;
      CHECK(v["pass"].get<bool>());
    }
  CHECK(saw_flush);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS((void)run_experiment("transport1d", {{"grid_n", 100}}, 0), ConfigError);
  CHECK_THROWS_AS((void)run_experiment("transport1d", {{"grid_n", 2048}}, 0), ConfigError);
  CHECK_THROWS_AS((void)run_experiment("pipe3d", {{"grid_n", 128}}, 0), ConfigError);
  CHECK_THROWS_AS((void)run_experiment("nope", {}, 0), ConfigError);
  CHECK_THROWS_AS(
      (void)run_experiment("hyp1d", {{"grid_n", 64}, {"horizon", -1.0}}, 0), ConfigError);
  CHECK_THROWS_AS(
      (void)run_experiment("transport1d",
                           {{"grid_n", 64}, {"f0", {{"name", "unheard-of"}}}}, 0),
      ConfigError);
}

TEST_CASE("round trip through disk and self-comparison") {
  nlohmann::json cfg = {{"grids", {16}}, {"p", 4.0}};
  SolveReport rep = run_experiment("divcurl", cfg, 1);
  const std::string dir = std::filesystem::temp_directory_path() / "inflow_report_test";
  write_report(rep, dir, "r");
  SolveReport back = read_report(dir + "/r.json");
  CompareResult diff = compare_reports(rep, back);
  CHECK(diff.schema_match);
  CHECK(diff.max_rel_diff == doctest::Approx(0.0));
  // csv begins with a header row
  std::ifstream csv(dir + "/r.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.substr(0, 2) == "t,");
  std::filesystem::remove_all(dir);
}

TEST_CASE("hyp1d preset produces level diagnostics and passes") {
  nlohmann::json cfg = {{"preset", "burgers-small"}, {"grid_n", 64},
                        {"horizon", 3.0}, {"dt", 0.1}, {"l_max", 4}};
  SolveReport rep = run_experiment("hyp1d", cfg, 0);
  CHECK(rep.meta["levels"].size() >= 2);
  CHECK(rep.all_pass());
  CHECK(rep.meta["stability_constant"].get<double>() < 10.0);
}
