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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrdw/app/config.hpp"
#include "mrdw/sim.hpp"

namespace mrdw::app {

/// One line of the trial CSV.
struct TrialRow {
  long long trial_id = 0;
  std::string config;
  std::string method;
  std::uint64_t seed = 0;
  int n_users = 0;
  int common_resets = 0;
  std::vector<double> virtual_distances;
  std::string status = "ok";
};

inline const std::vector<std::string> kCsvColumns = {
    "trial_id", "config",        "method",            "seed",
    "n_users",  "common_resets", "virtual_distances", "status"};

TrialRow make_row(long long trial_id, const std::string& config, Method method,
                  const TrialStats& stats);

std::string csv_header();
std::string csv_line(const TrialRow& row);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a trial CSV. Columns may appear in any order; extra columns are
/// ignored. Throws CsvError naming the missing column or the bad row
/// (1-based, header is row 1).
std::vector<TrialRow> read_csv(std::istream& in);
std::vector<TrialRow> read_csv_file(const std::filesystem::path& path);

/// Runs trials on `jobs` workers (0 = hardware concurrency). Results come
/// back in input order whatever the scheduling. `on_done` is called from
/// worker threads, serialized, with the input index.
std::vector<TrialStats> run_trials(
    const std::vector<TrialConfig>& trials, unsigned jobs,
    const std::function<void(std::size_t, const TrialStats&)>& on_done = {});

/// Per (config, method) statistics over successful trials, with pairwise
/// Mann-Whitney tests against `ours` (Bonferroni over the number of
/// baseline methods in each config).
nlohmann::json summarize_rows(const std::vector<TrialRow>& rows);

struct CompareResult {
  std::vector<TrialRow> rows;
  std::vector<double> wall_ms;
  nlohmann::json summary;
};

/// Runs the full experiment matrix: configs outer, then methods, then
/// trials with seeds seed, seed + 1, ...
CompareResult run_experiment(const ExperimentSpec& spec, RoomStore& store,
                             std::ostream* progress = nullptr);

}  // namespace mrdw::app
