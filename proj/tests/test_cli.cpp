// Copyright 2026 The mrdw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mrdw/app/commands.hpp"
#include "mrdw/app/config.hpp"
#include "mrdw/app/experiment.hpp"
#include "mrdw/app/report.hpp"
#include "mrdw/env_io.hpp"

namespace fs = std::filesystem;
using namespace mrdw;
using namespace mrdw::app;
using nlohmann::json;

namespace {

const fs::path kData = MRDW_DATA_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mrdw_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string square() { return (kData / "envs" / "square_5x5.json").string(); }

json small_spec(const fs::path& out, std::vector<std::string> methods, int trials) {
  return {{"methods", methods},
          {"configs", json::array({{{"name", "sq"}, {"envs", {square()}}, {"users", 2}}})},
          {"trials", trials},
          {"seed", 3},
          {"out", out.string()},
          {"distance_threshold", 25.0}};
}

int count(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("precompute writes 100 x 30 fields for the 5 m square and is byte-stable") {
  const fs::path dir = scratch("precompute");
  PrecomputeOptions opts{square(), dir / "a.json", {}, std::nullopt, 1};
  std::ostringstream out, err;
  REQUIRE(cmd_precompute(opts, out, err) == kExitOk);
  CHECK(out.str().find("100 positions x 30 orientations") != std::string::npos);
  opts.out = dir / "b.json";
  REQUIRE(cmd_precompute(opts, out, err) == kExitOk);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
}

TEST_CASE("precompute reports empty free space with exit code 2") {
  const fs::path dir = scratch("empty");
  write(dir / "blocked.json",
        R"({"boundary": [[0,0],[2,0],[2,2],[0,2]],
            "obstacles": [[[0.3,0.3],[1.7,0.3],[1.7,1.7],[0.3,1.7]]], "clearance": 0.2})");
  std::ostringstream out, err;
  PrecomputeOptions opts{dir / "blocked.json", dir / "c.json", {}, std::nullopt, 1};
  CHECK(cmd_precompute(opts, out, err) == kExitUsage);
  CHECK(err.str().find("free space") != std::string::npos);

  write(dir / "bad.json", R"({"boundary": [[0,0],[1,1],[1,0],[0,1]]})");
  opts.env = dir / "bad.json";
  CHECK(cmd_precompute(opts, out, err) == kExitUsage);
}

TEST_CASE("run emits one row echoing the seed, identically on reruns") {
  const fs::path dir = scratch("run");
  write(dir / "cfg.json", json{{"method", "ours"},
                               {"envs", {square(), square()}},
                               {"distance_threshold", 30.0}}
                              .dump());
  RunOptions opts;
  opts.config = dir / "cfg.json";
  opts.seed = 7;
  opts.trials = 1;
  opts.cache.disabled = true;
  std::ostringstream a, b, err;
  REQUIRE(cmd_run(opts, a, err) == kExitOk);
  REQUIRE(cmd_run(opts, b, err) == kExitOk);
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  const auto rows = read_csv(in);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].seed == 7);
  CHECK(rows[0].n_users == 2);
  CHECK(rows[0].method == "ours");
  CHECK(rows[0].status == "ok");
  for (double d : rows[0].virtual_distances) CHECK(d >= 30.0);

  opts.out = dir / "out.csv";
  REQUIRE(cmd_run(opts, a, err) == kExitOk);
  REQUIRE(cmd_run(opts, a, err) == kExitOk);
  const auto appended = read_csv_file(dir / "out.csv");
  REQUIRE(appended.size() == 2);
  CHECK(csv_line(appended[0]) == csv_line(appended[1]));
  CHECK(fs::exists(timings_path(dir / "out.csv")));
}

TEST_CASE("unknown method exits 2 and lists the supported methods") {
  const fs::path dir = scratch("badmethod");
  write(dir / "cfg.json", json{{"method", "apf"}, {"envs", {square()}}}.dump());
  RunOptions opts;
  opts.config = dir / "cfg.json";
  std::ostringstream out, err;
  CHECK(cmd_run(opts, out, err) == kExitUsage);
  CHECK(err.str().find("ours, s2c, s2o, zigzag") != std::string::npos);
}

TEST_CASE("config errors are usage errors") {
  const fs::path base = kData;
  CHECK_THROWS_AS(parse_run_config(json{{"method", "ours"}, {"envs", {square()}}, {"dt", 0.0}}, base),
                  UsageError);
  CHECK_THROWS_AS(parse_run_config(json{{"method", "ours"}, {"envs", {square()}}, {"colour", 1}}, base),
                  UsageError);
  CHECK_THROWS_AS(parse_run_config(json{{"method", "ours"}}, base), UsageError);
  CHECK_THROWS_AS(
      parse_run_config(json{{"method", "ours"}, {"envs", {square()}}, {"g_t_min", 2.0}}, base),
      UsageError);

  const RunConfig cfg = parse_run_config(
      json{{"method", "s2o"},
           {"users", {{{"env", "envs/square_5x5.json"}, {"start", {0.5, 0.0, 1.0}}}}},
           {"k", 6},
           {"lambda", 12}},
      base);
  CHECK(cfg.method == Method::kS2O);
  REQUIRE(cfg.users.size() == 1);
  CHECK(cfg.users[0].env == kData / "envs" / "square_5x5.json");
  REQUIRE(cfg.users[0].start);
  CHECK(cfg.users[0].start->heading() == doctest::Approx(1.0));
  CHECK(cfg.params.skeleton.k == 6);
  CHECK(cfg.params.skeleton.lambda == 12);
  CHECK(cfg.params.controller.reach.k == 6);
}

TEST_CASE("bundled configs and specs parse") {
  for (const auto& entry : fs::directory_iterator(kData / "configs")) {
    CAPTURE(entry.path());
    const RunConfig cfg = load_run_config(entry.path());
    for (const UserSpec& u : cfg.users) CHECK(fs::exists(u.env));
  }
  for (const auto& entry : fs::directory_iterator(kData / "experiments")) {
    CAPTURE(entry.path());
    const ExperimentSpec spec = load_experiment_spec(entry.path());
    for (const ConfigEntry& c : spec.configs) {
      for (const fs::path& e : c.envs) {
        CHECK_NOTHROW(load_env(e));
      }
    }
  }
}

TEST_CASE("compare: 2 methods x 10 trials gives 20 rows and one pairwise test") {
  const fs::path dir = scratch("compare");
  write(dir / "spec.json", small_spec(dir / "out", {"ours", "s2c"}, 10).dump());
  CompareOptions opts;
  opts.spec = dir / "spec.json";
  opts.jobs = 1;
  opts.quiet = true;
  opts.cache.dir = dir / "cache";
  std::ostringstream out, err;
  REQUIRE(cmd_compare(opts, out, err) == kExitOk);
  const auto rows = read_csv_file(dir / "out" / "trials.csv");
  CHECK(rows.size() == 20);
  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  int tests = 0;
  for (const json& rec : summary["records"]) {
    if (!rec["vs_ours"].is_null()) {
      ++tests;
      CHECK(rec["vs_ours"]["comparisons"] == 1);
    }
  }
  CHECK(tests == 1);
  CHECK(fs::exists(dir / "out" / "timings.csv"));
  CHECK(!fs::is_empty(dir / "cache"));
}

TEST_CASE("compare output does not depend on the number of workers") {
  const fs::path dir = scratch("determinism");
  write(dir / "spec.json", small_spec(dir / "out", {"ours", "zigzag"}, 4).dump());
  std::ostringstream out, err;
  CompareOptions opts;
  opts.spec = dir / "spec.json";
  opts.quiet = true;
  opts.cache.disabled = true;
  opts.jobs = 1;
  opts.out = dir / "j1";
  REQUIRE(cmd_compare(opts, out, err) == kExitOk);
  opts.jobs = 3;
  opts.out = dir / "j3";
  REQUIRE(cmd_compare(opts, out, err) == kExitOk);
  CHECK(slurp(dir / "j1" / "trials.csv") == slurp(dir / "j3" / "trials.csv"));
  CHECK(slurp(dir / "j1" / "summary.json") == slurp(dir / "j3" / "summary.json"));
}

TEST_CASE("compare with an empty method list exits 2") {
  const fs::path dir = scratch("nomethods");
  write(dir / "spec.json", small_spec(dir / "out", {}, 2).dump());
  CompareOptions opts;
  opts.spec = dir / "spec.json";
  opts.quiet = true;
  std::ostringstream out, err;
  CHECK(cmd_compare(opts, out, err) == kExitUsage);
}

TEST_CASE("summary statistics match a recomputation from the raw rows") {
  std::vector<TrialRow> rows;
  const std::vector<int> ours = {3, 9, 4, 4, 7}, other = {8, 12, 10, 9, 15, 11};
  long long id = 0;
  for (int v : ours) rows.push_back({id++, "c", "ours", 0, 1, v, {1.0}, "ok"});
  for (int v : other) rows.push_back({id++, "c", "s2c", 0, 1, v, {1.0}, "ok"});
  rows.push_back({id++, "c", "s2c", 0, 1, 0, {1.0}, "diverged"});
  const json s = summarize_rows(rows);

  auto median = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  const json& r0 = s["records"][0];
  CHECK(r0["method"] == "ours");
  CHECK(r0["n"] == 5);
  CHECK(r0["mean"].get<double>() == doctest::Approx(27.0 / 5.0));
  CHECK(r0["median"].get<double>() == median(ours));
  CHECK(r0["min"] == 3.0);
  CHECK(r0["max"] == 9.0);
  const json& r1 = s["records"][1];
  CHECK(r1["n"] == 6);
  CHECK(r1["failed"] == 1);
  CHECK(r1["median"].get<double>() == median(other));
  CHECK(r1["q1"].get<double>() <= r1["median"].get<double>());
  CHECK(r1["median"].get<double>() <= r1["q3"].get<double>());
  // Pairs won by s2c: 8 beats four, 9 beats four and ties one, the other
  // four beat all five. U = 4 + 4.5 + 20 out of 30.
  CHECK(r1["vs_ours"]["u"].get<double>() == doctest::Approx(28.5));
  CHECK(r1["vs_ours"]["u_ours"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("CSV reader names missing columns and bad rows") {
  std::istringstream missing("trial_id,config,method,seed,n_users,virtual_distances,status\n");
  CHECK_THROWS_WITH_AS(read_csv(missing), doctest::Contains("common_resets"), CsvError);

  std::istringstream bad(csv_header() + "0,c,ours,1,1,5,400.0,ok\n1,c,ours,2,1,x,400.0,ok\n");
  CHECK_THROWS_WITH_AS(read_csv(bad), doctest::Contains("row 3"), CsvError);

  std::istringstream short_row(csv_header() + "0,c,ours,1,1,5\n");
  CHECK_THROWS_WITH_AS(read_csv(short_row), doctest::Contains("row 2"), CsvError);

  const TrialRow row{4, "cfg", "s2c", 9, 2, 11, {400.5, 401.25}, "ok"};
  std::istringstream round(csv_header() + csv_line(row));
  const auto parsed = read_csv(round);
  REQUIRE(parsed.size() == 1);
  CHECK(csv_line(parsed[0]) == csv_line(row));
}

TEST_CASE("report draws one box plot per config with one box per method") {
  const fs::path dir = scratch("report");
  std::string csv = csv_header();
  long long id = 0;
  for (const char* m : {"ours", "s2c", "s2o", "zigzag"}) {
    for (int t = 0; t < 5; ++t) {
      csv += csv_line({id++, "only", m, static_cast<std::uint64_t>(t), 1, 10 + t, {400.0}, "ok"});
    }
  }
  write(dir / "trials.csv", csv);
  ReportOptions opts;
  opts.csv = dir / "trials.csv";
  opts.out_dir = dir / "svg";
  opts.envs = {square()};
  opts.cache.disabled = true;
  std::ostringstream out, err;
  REQUIRE(cmd_report(opts, out, err) == kExitOk);
  std::vector<fs::path> boxes;
  for (const auto& e : fs::directory_iterator(dir / "svg")) {
    if (e.path().filename().string().rfind("boxplot_", 0) == 0) boxes.push_back(e.path());
  }
  REQUIRE(boxes.size() == 1);
  const std::string svg = slurp(boxes[0]);
  CHECK(count(svg, "class=\"box\"") == 4);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(fs::exists(dir / "svg" / "heatmap_square_5x5_L.svg"));
  CHECK(fs::exists(dir / "svg" / "heatmap_square_5x5_H.svg"));

  write(dir / "broken.csv", "trial_id,config,method\n");
  opts.csv = dir / "broken.csv";
  std::ostringstream err2;
  CHECK(cmd_report(opts, out, err2) == kExitUsage);
  CHECK(err2.str().find("seed") != std::string::npos);
}

TEST_CASE("skeleton fields of the empty square are mirror symmetric") {
  const SkeletonGrid grid = SkeletonGrid::build(load_env(square()), {});
  std::map<std::pair<long, long>, std::size_t> at;
  auto key = [](Point2 p) { return std::pair{std::lround(p.x * 4), std::lround(p.y * 4)}; };
  for (std::size_t i = 0; i < grid.size(); ++i) at[key(grid.positions()[i])] = i;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point2 p = grid.positions()[i];
    // Only the mirrors keep the 12 degree orientation set; a quarter turn
    // does not.
    for (const Point2 q : {Point2{-p.x, p.y}, Point2{-p.x, -p.y}, Point2{p.x, -p.y}}) {
      const std::size_t j = at.at(key(q));
      CHECK(grid.escapability(j) == doctest::Approx(grid.escapability(i)).epsilon(1e-9));
      CHECK(grid.safety(j) == doctest::Approx(grid.safety(i)).epsilon(1e-9));
    }
  }

  auto argmax = [&](auto field) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (field(i) > field(best)) best = i;
    }
    return grid.positions()[best];
  };
  // Safety peaks in the four central cells.
  const Point2 h = argmax([&](std::size_t i) { return grid.safety(i); });
  CHECK(std::abs(h.x) == doctest::Approx(0.25));
  CHECK(std::abs(h.y) == doctest::Approx(0.25));
  // Escapability peaks in the corner cells, where the diagonal is longest.
  const Point2 l = argmax([&](std::size_t i) { return grid.escapability(i); });
  CHECK(std::abs(l.x) == doctest::Approx(2.25));
  CHECK(std::abs(l.y) == doctest::Approx(2.25));
}
