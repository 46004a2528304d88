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
#include <iosfwd>
#include <optional>
#include <vector>

#include "mrdw/skeleton.hpp"

namespace mrdw::app {

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

struct CacheOptions {
  /// Directory for skeleton caches; ".mrdw-cache" when unset.
  std::optional<std::filesystem::path> dir;
  bool disabled = false;
};

struct PrecomputeOptions {
  std::filesystem::path env;
  std::filesystem::path out;
  SkeletonParams params;
  std::optional<double> clearance;
  unsigned threads = 1;
};

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  /// CSV to append to; stdout when unset.
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> jobs;
  CacheOptions cache;
};

struct CompareOptions {
  std::filesystem::path spec;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> jobs;
  CacheOptions cache;
  bool quiet = false;
};

struct ReportOptions {
  std::filesystem::path csv;
  std::filesystem::path out_dir;
  /// Envs to draw L and H heatmaps for.
  std::vector<std::filesystem::path> envs;
  SkeletonParams params;
  std::optional<double> clearance;
  CacheOptions cache;
};

/// Each command reports progress on `out`, problems on `err`, and returns
/// an exit code instead of throwing.
int cmd_precompute(const PrecomputeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);

/// Sidecar file holding wall-clock times for the trials of `csv`.
std::filesystem::path timings_path(const std::filesystem::path& csv);

}  // namespace mrdw::app
