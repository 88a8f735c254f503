#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hhstab/sweep.hpp"

using namespace hhstab;

namespace {

SweepConfig power_sweep() {
  SweepConfig cfg;
  cfg.n_grid = {11, 12, 13, 14, 15};
  cfg.alpha_grid = {0};
  SubjectSpec s;
  s.kind = "power";
  s.g_scale = 1.0;
  cfg.subjects = {s};
  cfg.checks = {"theorem"};
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config validation") {
  SweepConfig cfg;
  cfg.alpha_grid = {0};
  cfg.checks = {"exponents"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n_grid = {3};
  CHECK_NOTHROW(cfg.validate());
  cfg.checks = {"nonsense"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.checks = {"theorem"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n_grid = {1.5};
  cfg.checks = {"exponents"};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n_grid = {3};
  cfg.tolerances.ladder_depth = 5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.tolerances.ladder_depth = 14;
  cfg.checks = {"theorem"};
  cfg.subjects = {SubjectSpec::from_json(nlohmann::json{{"kind", "unknown"}})};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("exponents-only 3x3 grid") {
  SweepConfig cfg;
  cfg.n_grid = {3, 10, 11};
  cfg.alpha_grid = {-1, 0, 1};
  cfg.checks = {"exponents"};
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_sweep(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(rows.size() == 9);
  CHECK(secs < 1.0);
  CHECK(rows[0].n == 3);
  CHECK(rows[0].alpha == -1);
  CHECK(rows[4].n == 10);
  CHECK(rows[4].verdict == "Critical");
  CHECK(std::abs(rows[4].value) <= 1e-12);
  for (const auto& r : rows) CHECK(r.status == "ok");
}

TEST_CASE("supercritical power profiles pass Theorem (iii)") {
  const auto rows = run_sweep(power_sweep());
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    INFO(r.n, " ", r.detail);
    CHECK(r.check == "theorem");
    CHECK(r.verdict == "pass");
    CHECK(std::isfinite(r.value));
  }
}

TEST_CASE("failing jobs become error rows") {
  SweepConfig cfg = power_sweep();
  cfg.n_grid = {10, 11};
  cfg.checks = {"residual", "theorem"};
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 4);
  // g = gamma vanishes on the critical line
  CHECK(rows[0].status == "error");
  CHECK(rows[1].status == "error");
  CHECK(rows[2].status == "ok");
  CHECK(rows[2].check == "residual");
  CHECK(rows[3].check == "theorem");
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  const std::string csv = sweep_csv({{3, 0, "-", "exponents", "ok", 0.5, "Subcritical", "x=1, y=2"}});
  CHECK(csv == "N,alpha,subject,check,status,value,verdict,detail\r\n3,0,-,exponents,ok,0.5,Subcritical,\"x=1, y=2\"\r\n");
}

TEST_CASE("config json round trip") {
  SweepConfig cfg = power_sweep();
  cfg.tolerances.growth = 1.1;
  cfg.workers = 3;
  const auto again = SweepConfig::from_json(cfg.to_json());
  CHECK(again.to_json() == cfg.to_json());
  CHECK(again.subjects[0].name() == cfg.subjects[0].name());
  CHECK(cfg.to_json()["schema_version"] == 1);
}

TEST_CASE("repeated runs write identical files") {
  const auto dir = std::filesystem::temp_directory_path() / "hhstab_sweep_test";
  std::filesystem::remove_all(dir);
  SweepConfig cfg = power_sweep();
  cfg.checks = {"exponents", "residual", "hardy", "lemma25"};
  cfg.workers = 4;
  cfg.output_dir = (dir / "a").string();
  write_sweep(cfg, run_sweep(cfg));
  cfg.workers = 1;
  const std::string first = slurp(dir / "a" / "sweep.csv");
  cfg.output_dir = (dir / "b").string();
  write_sweep(cfg, run_sweep(cfg));
  CHECK(first == slurp(dir / "b" / "sweep.csv"));
  CHECK(!first.empty());
  const auto j = nlohmann::json::parse(slurp(dir / "b" / "sweep.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(j["rows"].size() == 20);
  std::filesystem::remove_all(dir);
}

TEST_CASE("worker resolution order") {
  SweepConfig cfg;
  cfg.workers = 2;
  unsetenv("HHSTAB_WORKERS");
  CHECK(resolve_workers(std::nullopt, cfg) == 2);
  setenv("HHSTAB_WORKERS", "5", 1);
  CHECK(resolve_workers(std::nullopt, cfg) == 5);
  CHECK(resolve_workers(7u, cfg) == 7);
  setenv("HHSTAB_WORKERS", "many", 1);
  CHECK(resolve_workers(std::nullopt, cfg) == 2);
  unsetenv("HHSTAB_WORKERS");
}
