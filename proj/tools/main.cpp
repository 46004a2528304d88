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

#include <iostream>

#include <CLI11.hpp>

#include "mrdw/app/commands.hpp"

namespace {

void add_skeleton_flags(CLI::App* cmd, mrdw::SkeletonParams& p,
                        std::optional<double>& clearance) {
  cmd->add_option("--delta", p.delta, "Grid spacing in meters")->capture_default_str();
  cmd->add_option("--lambda", p.lambda, "Number of skeleton orientations")
      ->capture_default_str();
  cmd->add_option("--k", p.k, "Curvature candidate pairs")->capture_default_str();
  cmd->add_option("--g-t-min", p.bounds.g_t_min, "Smallest translation gain")
      ->capture_default_str();
  cmd->add_option("--g-t-max", p.bounds.g_t_max, "Largest translation gain")
      ->capture_default_str();
  cmd->add_option("--curvature-radius-min", p.bounds.radius_min,
                  "Smallest curvature radius in meters")
      ->capture_default_str();
  cmd->add_option("--clearance", clearance, "Override the env file's clearance");
}

void add_cache_flags(CLI::App* cmd, mrdw::app::CacheOptions& c) {
  cmd->add_option("--cache-dir", c.dir, "Skeleton cache directory (default .mrdw-cache)");
  cmd->add_flag("--no-cache", c.disabled, "Keep skeleton fields in memory only");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mrdw::app;
  CLI::App app{"Multi-user redirected walking simulator"};
  app.set_version_flag("--version", "mrdw 0.1.0");
  app.require_subcommand(1);

  PrecomputeOptions pre;
  auto* precompute = app.add_subcommand("precompute", "Build the skeleton cache of an env");
  precompute->add_option("env", pre.env, "Environment JSON")->required();
  precompute->add_option("-o,--out", pre.out, "Cache file to write")->required();
  add_skeleton_flags(precompute, pre.params, pre.clearance);
  precompute->add_option("--threads", pre.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run the trials of one trial config");
  run_cmd->add_option("config", run.config, "Trial config JSON")->required();
  run_cmd->add_option("--seed", run.seed, "Base seed");
  run_cmd->add_option("--trials", run.trials, "Number of trials");
  run_cmd->add_option("-o,--out", run.out, "CSV file to append to (default stdout)");
  run_cmd->add_option("-j,--jobs", run.jobs, "Parallel trials, 0 = all cores");
  add_cache_flags(run_cmd, run.cache);

  CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "Run an experiment matrix");
  compare->add_option("spec", cmp.spec, "Experiment spec JSON")->required();
  compare->add_option("--seed", cmp.seed, "Base seed");
  compare->add_option("--trials", cmp.trials, "Trials per method and config");
  compare->add_option("-o,--out", cmp.out, "Output directory");
  compare->add_option("-j,--jobs", cmp.jobs, "Parallel trials, 0 = all cores");
  compare->add_flag("-q,--quiet", cmp.quiet, "No progress or summary table");
  add_cache_flags(compare, cmp.cache);

  ReportOptions rep;
  auto* report = app.add_subcommand("report", "Draw box plots and skeleton heatmaps");
  report->add_option("csv", rep.csv, "Trial CSV")->required();
  report->add_option("-o,--out", rep.out_dir, "Output directory")->required();
  report->add_option("--env", rep.envs, "Env to draw L and H heatmaps for (repeatable)");
  add_skeleton_flags(report, rep.params, rep.clearance);
  add_cache_flags(report, rep.cache);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*precompute) return cmd_precompute(pre, std::cout, std::cerr);
  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*compare) return cmd_compare(cmp, std::cout, std::cerr);
  return cmd_report(rep, std::cout, std::cerr);
}
