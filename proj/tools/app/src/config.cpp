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

#include "mrdw/app/config.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "mrdw/env_io.hpp"

namespace mrdw::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kSharedKeys = {
    "distance_threshold", "dt", "targets", "speed", "clearance",
    "g_t_min", "g_t_max", "curvature_radius_min", "k", "delta", "lambda",
    "discrete_radius", "baseline"};

double number(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw UsageError(fmt::format("\"{}\" must be a number", key));
  return v.get<double>();
}

long long integer(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) {
    throw UsageError(fmt::format("\"{}\" must be an integer", key));
  }
  return v.get<long long>();
}

void read_number(const json& doc, const std::string& key, double& out) {
  if (doc.contains(key)) out = number(doc, key);
}

std::string string_value(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw UsageError(fmt::format("\"{}\" must be a string", key));
  return v.get<std::string>();
}

void check_object(const json& doc, const std::string& what) {
  if (!doc.is_object()) throw UsageError(what + " must be a JSON object");
}

void check_keys(const json& doc, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UsageError(fmt::format("unknown key \"{}\" in {}", key, where));
    }
  }
}

std::uint64_t seed_value(const json& doc) {
  const long long s = integer(doc, "seed");
  if (s < 0) throw UsageError("\"seed\" must be non-negative");
  return static_cast<std::uint64_t>(s);
}

int trials_value(const json& doc) {
  const long long t = integer(doc, "trials");
  if (t < 1) throw UsageError("\"trials\" must be at least 1");
  return static_cast<int>(t);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

Pose parse_start(const json& j) {
  if (!j.is_array() || j.size() != 3 ||
      !std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_number(); })) {
    throw UsageError("\"start\" must be [x, y, heading]");
  }
  return Pose({j[0].get<double>(), j[1].get<double>()}, j[2].get<double>());
}

std::vector<fs::path> env_list(const json& doc, const fs::path& base) {
  const json& envs = doc.at("envs");
  if (!envs.is_array() || envs.empty()) {
    throw UsageError("\"envs\" must be a non-empty array of paths");
  }
  std::vector<fs::path> out;
  for (const json& e : envs) {
    if (!e.is_string()) throw UsageError("\"envs\" entries must be strings");
    out.push_back(resolve(base, e.get<std::string>()));
  }
  return out;
}

}  // namespace

Method method_or_throw(const std::string& name) {
  if (const auto m = parse_method(name)) return *m;
  throw UsageError(fmt::format("unknown method \"{}\" (supported: {})", name,
                               kSupportedMethods));
}

void parse_trial_params(const json& doc, TrialParams& params,
                        const std::vector<std::string>& own) {
  std::vector<std::string> allowed = kSharedKeys;
  allowed.insert(allowed.end(), own.begin(), own.end());
  check_keys(doc, allowed, "configuration");

  read_number(doc, "distance_threshold", params.distance_threshold);
  read_number(doc, "dt", params.dt);
  read_number(doc, "speed", params.speed);
  if (doc.contains("clearance")) params.clearance = number(doc, "clearance");
  if (doc.contains("targets")) {
    const json& t = doc.at("targets");
    check_object(t, "\"targets\"");
    check_keys(t, {"min_distance", "max_distance"}, "\"targets\"");
    read_number(t, "min_distance", params.targets.min_distance);
    read_number(t, "max_distance", params.targets.max_distance);
  }

  GainBounds& b = params.controller.bounds;
  read_number(doc, "g_t_min", b.g_t_min);
  read_number(doc, "g_t_max", b.g_t_max);
  read_number(doc, "curvature_radius_min", b.radius_min);
  if (doc.contains("k")) params.controller.k = static_cast<int>(integer(doc, "k"));
  if (doc.contains("lambda")) {
    params.controller.lambda = static_cast<int>(integer(doc, "lambda"));
  }
  read_number(doc, "delta", params.skeleton.delta);
  if (doc.contains("discrete_radius")) {
    if (!doc.at("discrete_radius").is_boolean()) {
      throw UsageError("\"discrete_radius\" must be true or false");
    }
    params.controller.reach.discrete_radius = doc.at("discrete_radius").get<bool>();
  }
  if (doc.contains("baseline")) {
    const json& bl = doc.at("baseline");
    check_object(bl, "\"baseline\"");
    check_keys(bl,
               {"deadband_deg", "center_tolerance", "orbit_fraction", "zigzag_first",
                "zigzag_second", "zigzag_switch_distance"},
               "\"baseline\"");
    BaselineParams& p = params.controller.baseline;
    read_number(bl, "deadband_deg", p.deadband_deg);
    read_number(bl, "center_tolerance", p.center_tolerance);
    read_number(bl, "orbit_fraction", p.orbit_fraction);
    read_number(bl, "zigzag_first", p.zigzag_first);
    read_number(bl, "zigzag_second", p.zigzag_second);
    read_number(bl, "zigzag_switch_distance", p.zigzag_switch_distance);
  }

  params.controller.reach.k = params.controller.k;
  params.skeleton.k = params.controller.k;
  params.skeleton.lambda = params.controller.lambda;
  params.skeleton.bounds = b;

  if (auto err = b.check()) throw UsageError("gain bounds: " + *err);
  if (!(params.dt > 0.0)) throw UsageError("\"dt\" must be positive");
  if (!(params.distance_threshold >= 0.0)) {
    throw UsageError("\"distance_threshold\" must be non-negative");
  }
  if (!(params.speed > 0.0)) throw UsageError("\"speed\" must be positive");
  if (params.controller.k < 1) throw UsageError("\"k\" must be at least 1");
  if (params.controller.lambda < 1) throw UsageError("\"lambda\" must be at least 1");
  if (!(params.skeleton.delta > 0.0)) throw UsageError("\"delta\" must be positive");
  if (params.clearance && !(*params.clearance >= 0.0)) {
    throw UsageError("\"clearance\" must be non-negative");
  }
  if (!(params.targets.min_distance > 0.0) ||
      !(params.targets.max_distance >= params.targets.min_distance)) {
    throw UsageError("\"targets\" needs 0 < min_distance <= max_distance");
  }
}

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  check_object(doc, "trial config");
  RunConfig cfg;
  parse_trial_params(doc, cfg.params,
                     {"method", "envs", "users", "seed", "trials", "cache_dir"});
  if (!doc.contains("method")) throw UsageError("trial config needs \"method\"");
  cfg.method = method_or_throw(string_value(doc, "method"));
  if (doc.contains("seed")) cfg.seed = seed_value(doc);
  if (doc.contains("trials")) cfg.trials = trials_value(doc);
  if (doc.contains("cache_dir")) cfg.cache_dir = resolve(base_dir, string_value(doc, "cache_dir"));

  if (doc.contains("envs") == doc.contains("users")) {
    throw UsageError("trial config needs exactly one of \"envs\" or \"users\"");
  }
  if (doc.contains("envs")) {
    for (const fs::path& p : env_list(doc, base_dir)) {
      cfg.users.push_back({p, cfg.params.speed, std::nullopt});
    }
  } else {
    const json& users = doc.at("users");
    if (!users.is_array() || users.empty()) {
      throw UsageError("\"users\" must be a non-empty array");
    }
    for (const json& u : users) {
      check_object(u, "user entry");
      check_keys(u, {"env", "speed", "start"}, "user entry");
      if (!u.contains("env")) throw UsageError("user entry needs \"env\"");
      UserSpec spec{resolve(base_dir, string_value(u, "env")), cfg.params.speed,
                    std::nullopt};
      read_number(u, "speed", spec.speed);
      if (!(spec.speed > 0.0)) throw UsageError("\"speed\" must be positive");
      if (u.contains("start")) spec.start = parse_start(u.at("start"));
      cfg.users.push_back(std::move(spec));
    }
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_json(path), path.parent_path());
}

ExperimentSpec parse_experiment_spec(const json& doc, const fs::path& base_dir) {
  check_object(doc, "experiment spec");
  ExperimentSpec spec;
  parse_trial_params(doc, spec.params,
                     {"methods", "configs", "trials", "seed", "out", "jobs", "cache_dir"});
  if (!doc.contains("methods") || !doc.at("methods").is_array()) {
    throw UsageError("experiment spec needs a \"methods\" array");
  }
  for (const json& m : doc.at("methods")) {
    if (!m.is_string()) throw UsageError("\"methods\" entries must be strings");
    const Method method = method_or_throw(m.get<std::string>());
    if (std::find(spec.methods.begin(), spec.methods.end(), method) != spec.methods.end()) {
      throw UsageError(fmt::format("method \"{}\" listed twice", m.get<std::string>()));
    }
    spec.methods.push_back(method);
  }
  if (spec.methods.empty()) {
    throw UsageError(fmt::format("\"methods\" is empty (supported: {})", kSupportedMethods));
  }

  if (!doc.contains("configs") || !doc.at("configs").is_array() ||
      doc.at("configs").empty()) {
    throw UsageError("experiment spec needs a non-empty \"configs\" array");
  }
  for (const json& c : doc.at("configs")) {
    check_object(c, "config entry");
    check_keys(c, {"name", "envs", "users"}, "config entry");
    if (!c.contains("name") || !c.contains("envs")) {
      throw UsageError("config entry needs \"name\" and \"envs\"");
    }
    ConfigEntry entry;
    entry.name = string_value(c, "name");
    if (entry.name.empty() ||
        entry.name.find_first_of(",;\"\n\r/\\") != std::string::npos) {
      throw UsageError(fmt::format(
          "config name \"{}\" must be non-empty without , ; \" / \\ or newlines",
          entry.name));
    }
    for (const ConfigEntry& other : spec.configs) {
      if (other.name == entry.name) {
        throw UsageError(fmt::format("config name \"{}\" used twice", entry.name));
      }
    }
    entry.envs = env_list(c, base_dir);
    entry.users = static_cast<int>(entry.envs.size());
    if (c.contains("users")) entry.users = static_cast<int>(integer(c, "users"));
    if (entry.users < 1) throw UsageError("\"users\" must be at least 1");
    spec.configs.push_back(std::move(entry));
  }

  if (doc.contains("trials")) spec.trials = trials_value(doc);
  if (doc.contains("seed")) spec.seed = seed_value(doc);
  spec.out = doc.contains("out") ? resolve(base_dir, string_value(doc, "out"))
                                 : fs::path("results");
  if (doc.contains("jobs")) {
    const long long j = integer(doc, "jobs");
    if (j < 0) throw UsageError("\"jobs\" must be non-negative");
    spec.jobs = static_cast<unsigned>(j);
  }
  if (doc.contains("cache_dir")) {
    spec.cache_dir = resolve(base_dir, string_value(doc, "cache_dir"));
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const fs::path& path) {
  return parse_experiment_spec(read_json(path), path.parent_path());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

RoomStore::RoomStore(std::optional<fs::path> cache_dir, unsigned build_threads)
    : cache_dir_(std::move(cache_dir)), build_threads_(build_threads) {}

std::string RoomStore::cache_name(const fs::path& env_path, const PhysEnv& env,
                                  const SkeletonParams& p) {
  return fmt::format("{}-{}-d{}-l{}-k{}-g{}_{}-r{}.skeleton.json",
                     env_path.stem().string(), env_hash(env).substr(0, 12), p.delta,
                     p.lambda, p.k, p.bounds.g_t_min, p.bounds.g_t_max,
                     p.bounds.radius_min);
}

std::shared_ptr<const Room> RoomStore::get(const fs::path& env_path,
                                           const SkeletonParams& params,
                                           std::optional<double> clearance) {
  // Holding the lock while building keeps each field built exactly once;
  // builds happen before trials start, so nothing waits on it for long.
  std::lock_guard lock(mutex_);
  PhysEnv env = load_env(env_path, clearance);
  const std::string key = cache_name(env_path, env, params);
  if (auto it = rooms_.find(key); it != rooms_.end()) return it->second;

  std::optional<SkeletonGrid> grid;
  fs::path file;
  if (cache_dir_) {
    file = *cache_dir_ / key;
    if (fs::exists(file)) {
      try {
        grid = SkeletonGrid::load(file, env, params);
      } catch (const std::exception&) {
        grid.reset();
      }
    }
  }
  if (!grid) {
    grid = SkeletonGrid::build(env, params, build_threads_);
    if (cache_dir_) {
      fs::create_directories(*cache_dir_);
      grid->save(file);
    }
  }
  auto room = std::make_shared<const Room>(Room{std::move(env), std::move(*grid)});
  rooms_.emplace(key, room);
  return room;
}

TrialConfig make_trial(Method method, const std::vector<UserSpec>& users,
                       std::uint64_t seed, const TrialParams& params,
                       RoomStore& store) {
  TrialConfig cfg;
  cfg.method = method;
  cfg.seed = seed;
  cfg.distance_threshold = params.distance_threshold;
  cfg.dt = params.dt;
  cfg.targets = params.targets;
  cfg.controller = params.controller;
  for (const UserSpec& u : users) {
    cfg.users.push_back(
        {store.get(u.env, params.skeleton, params.clearance), u.speed, u.start});
  }
  return cfg;
}

}  // namespace mrdw::app
