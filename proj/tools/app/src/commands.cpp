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

#include "mrdw/app/commands.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "mrdw/app/config.hpp"
#include "mrdw/app/experiment.hpp"
#include "mrdw/app/report.hpp"
#include "mrdw/env_io.hpp"

namespace mrdw::app {

namespace fs = std::filesystem;

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const EmptyFreeSpace& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GeometryError& e) {
    err << "error: invalid geometry: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

std::optional<fs::path> cache_dir(const CacheOptions& opts,
                                  const std::optional<fs::path>& from_config) {
  if (opts.disabled) return std::nullopt;
  if (opts.dir) return opts.dir;
  if (from_config) return from_config;
  return fs::path(".mrdw-cache");
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::string timings_text(const std::vector<TrialRow>& rows,
                         const std::vector<double>& wall_ms, bool header) {
  std::string text = header ? "trial_id,wall_time_ms\n" : "";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    text += fmt::format("{},{:.3f}\n", rows[i].trial_id, wall_ms[i]);
  }
  return text;
}

}  // namespace

fs::path timings_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".timings.csv");
  return p;
}

int cmd_precompute(const PrecomputeOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (auto e = opts.params.bounds.check()) throw UsageError("gain bounds: " + *e);
    if (!(opts.params.delta > 0.0) || opts.params.lambda < 1 || opts.params.k < 1) {
      throw UsageError("need delta > 0, lambda >= 1 and k >= 1");
    }
    const PhysEnv env = load_env(opts.env, opts.clearance);
    const auto start = std::chrono::steady_clock::now();
    const SkeletonGrid grid = SkeletonGrid::build(env, opts.params, opts.threads);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opts.out.has_parent_path()) fs::create_directories(opts.out.parent_path());
    grid.save(opts.out);
    out << fmt::format("{} positions x {} orientations in {:.2f} s -> {}\n", grid.size(),
                       grid.orientations().size(), secs, opts.out.string());
    return kExitOk;
  });
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_run_config(opts.config);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.trials) {
      if (*opts.trials < 1) throw UsageError("--trials must be at least 1");
      cfg.trials = *opts.trials;
    }
    RoomStore store(cache_dir(opts.cache, cfg.cache_dir), opts.jobs.value_or(0));
    std::vector<TrialConfig> trials;
    for (int t = 0; t < cfg.trials; ++t) {
      trials.push_back(make_trial(cfg.method, cfg.users,
                                  cfg.seed + static_cast<std::uint64_t>(t), cfg.params,
                                  store));
    }
    const std::vector<TrialStats> stats = run_trials(trials, opts.jobs.value_or(0));

    const std::string config_name = opts.config.stem().string();
    std::vector<TrialRow> rows;
    std::vector<double> wall;
    std::string text;
    for (std::size_t i = 0; i < stats.size(); ++i) {
      rows.push_back(make_row(static_cast<long long>(i), config_name, cfg.method, stats[i]));
      wall.push_back(stats[i].wall_ms);
      text += csv_line(rows.back());
      if (stats[i].status != TrialStatus::kOk) {
        err << fmt::format("trial {} (seed {}) {}: {}\n", i, stats[i].seed,
                           status_name(stats[i].status), stats[i].message);
      }
    }

    if (!opts.out) {
      out << csv_header() << text;
      return kExitOk;
    }
    const bool fresh = !fs::exists(*opts.out) || fs::file_size(*opts.out) == 0;
    if (!fresh) {
      std::ifstream existing(*opts.out);
      std::string first;
      std::getline(existing, first);
      if (first + '\n' != csv_header()) {
        throw UsageError(opts.out->string() + " exists with a different header");
      }
    }
    if (opts.out->has_parent_path()) fs::create_directories(opts.out->parent_path());
    {
      std::ofstream f(*opts.out, std::ios::binary | std::ios::app);
      f << (fresh ? csv_header() : "") << text;
      if (!f) throw std::runtime_error("cannot write " + opts.out->string());
    }
    const fs::path tp = timings_path(*opts.out);
    const bool fresh_timings = !fs::exists(tp);
    std::ofstream f(tp, std::ios::binary | std::ios::app);
    f << timings_text(rows, wall, fresh_timings);
    out << fmt::format("{} trial(s) appended to {}\n", rows.size(), opts.out->string());
    return kExitOk;
  });
}

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentSpec spec = load_experiment_spec(opts.spec);
    if (opts.seed) spec.seed = *opts.seed;
    if (opts.trials) {
      if (*opts.trials < 1) throw UsageError("--trials must be at least 1");
      spec.trials = *opts.trials;
    }
    if (opts.out) spec.out = *opts.out;
    if (opts.jobs) spec.jobs = *opts.jobs;

    RoomStore store(cache_dir(opts.cache, spec.cache_dir), spec.jobs);
    const CompareResult result = run_experiment(spec, store, opts.quiet ? nullptr : &err);

    std::string csv = csv_header();
    int failed = 0;
    for (const TrialRow& r : result.rows) {
      csv += csv_line(r);
      if (r.status != "ok") ++failed;
    }
    write_file(spec.out / "trials.csv", csv);
    write_file(spec.out / "timings.csv", timings_text(result.rows, result.wall_ms, true));
    write_file(spec.out / "summary.json", result.summary.dump(2) + "\n");

    if (!opts.quiet) {
      out << fmt::format("{:<16} {:<8} {:>4} {:>9} {:>7} {:>10}\n", "config", "method", "n",
                         "mean", "median", "p_bonf");
      for (const auto& rec : result.summary["records"]) {
        const std::string p = rec["vs_ours"].is_null()
                                  ? "-"
                                  : fmt::format("{:.3g}", rec["vs_ours"]["p_bonferroni"].get<double>());
        out << fmt::format("{:<16} {:<8} {:>4} {:>9.2f} {:>7.1f} {:>10}\n",
                           rec["config"].get<std::string>(), rec["method"].get<std::string>(),
                           rec["n"].get<std::size_t>(), rec.value("mean", 0.0),
                           rec.value("median", 0.0), p);
      }
      out << fmt::format("{} trials ({} failed) -> {}\n", result.rows.size(), failed,
                         spec.out.string());
    }
    return kExitOk;
  });
}

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<TrialRow> rows = read_csv_file(opts.csv);
    fs::create_directories(opts.out_dir);

    std::vector<std::string> configs;
    std::map<std::string, std::vector<std::string>> methods;
    std::map<std::pair<std::string, std::string>, std::vector<double>> values;
    for (const TrialRow& r : rows) {
      if (!methods.count(r.config)) configs.push_back(r.config);
      auto& ms = methods[r.config];
      if (std::find(ms.begin(), ms.end(), r.method) == ms.end()) ms.push_back(r.method);
      auto& v = values[{r.config, r.method}];
      if (r.status == "ok") v.push_back(r.common_resets);
    }
    for (const std::string& c : configs) {
      std::vector<BoxSeries> series;
      for (const std::string& m : methods[c]) {
        const auto& v = values[{c, m}];
        series.push_back({m, v.empty() ? Summary{} : summarize(v), v});
      }
      const fs::path file = opts.out_dir / fmt::format("boxplot_{}.svg", c);
      write_file(file, box_plot_svg(c, series));
      out << file.string() << '\n';
    }

    RoomStore store(cache_dir(opts.cache, std::nullopt));
    for (const fs::path& env : opts.envs) {
      const auto room = store.get(env, opts.params, opts.clearance);
      const std::string stem = env.stem().string();
      for (const auto& [field, tag, name] :
           {std::tuple{Field::kEscapability, "L", "escapability L"},
            std::tuple{Field::kSafety, "H", "safety H"}}) {
        const fs::path file = opts.out_dir / fmt::format("heatmap_{}_{}.svg", stem, tag);
        write_file(file, heatmap_svg(fmt::format("{}: {} (s at 1 m/s)", stem, name), *room,
                                     field));
        out << file.string() << '\n';
      }
    }
    return kExitOk;
  });
}

}  // namespace mrdw::app
