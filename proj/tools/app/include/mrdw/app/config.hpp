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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrdw/sim.hpp"

namespace mrdw::app {

/// Bad command line, config or spec. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Trial parameters shared by trial configs and experiment specs. Env
/// paths are already resolved against the file that named them.
struct TrialParams {
  double distance_threshold = 400.0;
  double dt = 0.01;
  TargetSampling targets;
  double speed = 1.0;
  std::optional<double> clearance;
  SkeletonParams skeleton;
  ControllerParams controller;
};

/// Reads the shared keys of `doc` into `params`. Keys listed in `own` belong
/// to the caller; anything else unknown is a UsageError.
void parse_trial_params(const nlohmann::json& doc, TrialParams& params,
                        const std::vector<std::string>& own);

struct UserSpec {
  std::filesystem::path env;
  double speed = 1.0;
  std::optional<Pose> start;
};

/// A single-configuration run: one method, one user list.
struct RunConfig {
  Method method = Method::kOurs;
  std::vector<UserSpec> users;
  std::uint64_t seed = 0;
  int trials = 1;
  TrialParams params;
  std::optional<std::filesystem::path> cache_dir;
};

RunConfig parse_run_config(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// One PE combination of an experiment matrix. `envs` is cycled to fill
/// `users` slots.
struct ConfigEntry {
  std::string name;
  std::vector<std::filesystem::path> envs;
  int users = 0;
};

struct ExperimentSpec {
  std::vector<Method> methods;
  std::vector<ConfigEntry> configs;
  int trials = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  unsigned jobs = 0;
  TrialParams params;
  std::optional<std::filesystem::path> cache_dir;
};

ExperimentSpec parse_experiment_spec(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

Method method_or_throw(const std::string& name);

/// Loads rooms and their skeleton fields once per (env, parameters) and
/// keeps an optional on-disk cache of the fields. Thread-safe.
class RoomStore {
 public:
  explicit RoomStore(std::optional<std::filesystem::path> cache_dir = std::nullopt,
                     unsigned build_threads = 1);

  std::shared_ptr<const Room> get(const std::filesystem::path& env_path,
                                  const SkeletonParams& params,
                                  std::optional<double> clearance = std::nullopt);

  /// File name used for the skeleton cache of an env under `params`.
  static std::string cache_name(const std::filesystem::path& env_path,
                                const PhysEnv& env, const SkeletonParams& params);

 private:
  std::optional<std::filesystem::path> cache_dir_;
  unsigned build_threads_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const Room>> rooms_;
};

TrialConfig make_trial(Method method, const std::vector<UserSpec>& users,
                       std::uint64_t seed, const TrialParams& params,
                       RoomStore& store);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace mrdw::app
