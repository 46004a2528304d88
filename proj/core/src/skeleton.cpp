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

#include "mrdw/skeleton.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

#include "mrdw/horizon.hpp"

namespace mrdw {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "mrdw-skeleton/1";

class Fnv1a {
 public:
  void add(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (word >> (8 * i)) & 0xffu;
      hash_ *= 0x100000001b3ull;
    }
  }
  void add(double d) { add(std::bit_cast<std::uint64_t>(d == 0.0 ? 0.0 : d)); }
  void add(const Polygon& poly) {
    add(static_cast<std::uint64_t>(poly.size()));
    for (const Point2& p : poly) {
      add(p.x);
      add(p.y);
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

json time_to_json(double t) { return std::isinf(t) ? json(nullptr) : json(t); }
double time_from_json(const json& j) {
  return j.is_null() ? kInf : j.get<double>();
}

json params_to_json(const SkeletonParams& p) {
  return {{"delta", p.delta},
          {"lambda", p.lambda},
          {"k", p.k},
          {"g_t_min", p.bounds.g_t_min},
          {"g_t_max", p.bounds.g_t_max},
          {"curvature_radius_min", p.bounds.radius_min}};
}

SkeletonParams params_from_json(const json& j) {
  SkeletonParams p;
  p.delta = j.at("delta").get<double>();
  p.lambda = j.at("lambda").get<int>();
  p.k = j.at("k").get<int>();
  p.bounds.g_t_min = j.at("g_t_min").get<double>();
  p.bounds.g_t_max = j.at("g_t_max").get<double>();
  p.bounds.radius_min = j.at("curvature_radius_min").get<double>();
  return p;
}

}  // namespace

bool SkeletonParams::operator==(const SkeletonParams& o) const {
  return delta == o.delta && lambda == o.lambda && k == o.k &&
         bounds.g_t_min == o.bounds.g_t_min &&
         bounds.g_t_max == o.bounds.g_t_max &&
         bounds.radius_min == o.bounds.radius_min;
}

std::string env_hash(const PhysEnv& env) {
  Fnv1a h;
  h.add(env.boundary());
  h.add(static_cast<std::uint64_t>(env.obstacles().size()));
  for (const Polygon& o : env.obstacles()) h.add(o);
  h.add(env.clearance());
  return fmt::format("{:016x}", h.value());
}

double harmonic_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double inv = 0.0;
  for (const double t : values) inv += 1.0 / t;
  return static_cast<double>(values.size()) / inv;
}

SkeletonGrid SkeletonGrid::build(const PhysEnv& env,
                                 const SkeletonParams& params,
                                 unsigned threads) {
  if (!(params.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (auto err = params.bounds.check()) throw std::invalid_argument(*err);

  SkeletonGrid grid;
  grid.params_ = params;
  grid.env_hash_ = mrdw::env_hash(env);
  grid.origin_ = env.bounds().min;
  grid.nx_ = static_cast<int>(std::ceil(env.bounds().width() / params.delta - 1e-9));
  grid.ny_ = static_cast<int>(std::ceil(env.bounds().height() / params.delta - 1e-9));
  grid.orientations_ = skeleton_orientations(params.lambda);

  for (int iy = 0; iy < grid.ny_; ++iy) {
    for (int ix = 0; ix < grid.nx_; ++ix) {
      const Point2 c = grid.origin_ + Vec2{(ix + 0.5) * params.delta,
                                           (iy + 0.5) * params.delta};
      if (env.in_free_space(c)) {
        grid.positions_.push_back(c);
        grid.cells_.push_back(iy * grid.nx_ + ix);
      }
    }
  }
  if (grid.positions_.empty()) throw EmptyFreeSpace();

  const std::size_t n = grid.positions_.size();
  const std::size_t lambda = grid.orientations_.size();
  grid.table_.assign(n * lambda, 0.0);
  grid.escapability_.assign(n, 0.0);
  grid.safety_.assign(n, 0.0);
  const auto candidates = candidate_paths(params.k, params.bounds);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t p = first; p < n; p += stride) {
      std::span<double> row(grid.table_.data() + p * lambda, lambda);
      for (std::size_t o = 0; o < lambda; ++o) {
        row[o] = walk_times(Pose(grid.positions_[p], grid.orientations_[o]),
                            1.0, env, candidates, params.bounds)
                     .t_max;
      }
      grid.escapability_[p] = *std::max_element(row.begin(), row.end());
      grid.safety_[p] = harmonic_mean(row);
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return grid;
}

std::size_t SkeletonGrid::cell_of(Point2 p) const {
  const int ix = static_cast<int>(std::floor((p.x - origin_.x) / params_.delta));
  const int iy = static_cast<int>(std::floor((p.y - origin_.y) / params_.delta));
  if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return size();
  const auto it = std::lower_bound(cells_.begin(), cells_.end(), iy * nx_ + ix);
  if (it == cells_.end() || *it != iy * nx_ + ix) return size();
  return static_cast<std::size_t>(it - cells_.begin());
}

void SkeletonGrid::save(const std::filesystem::path& path) const {
  json positions = json::array();
  for (const Point2& p : positions_) positions.push_back({p.x, p.y});
  json table = json::array();
  for (const double t : table_) table.push_back(time_to_json(t));
  json esc = json::array();
  for (const double t : escapability_) esc.push_back(time_to_json(t));
  json safe = json::array();
  for (const double t : safety_) safe.push_back(time_to_json(t));

  const json doc = {
      {"format", kFormatTag},
      {"env_hash", env_hash_},
      {"params", params_to_json(params_)},
      {"speed_reference", 1.0},
      {"origin", {origin_.x, origin_.y}},
      {"shape", {nx_, ny_}},
      {"cells", cells_},
      {"positions", positions},
      {"t_max", table},
      {"escapability", esc},
      {"safety", safe},
  };
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump() << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

SkeletonGrid SkeletonGrid::load(const std::filesystem::path& path,
                                const PhysEnv& env,
                                const SkeletonParams& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StaleCache("cache file missing: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw StaleCache(fmt::format("unreadable cache {}: {}", path.string(),
                                 e.what()));
  }
  if (doc.value("format", "") != kFormatTag) {
    throw StaleCache("unknown cache format in " + path.string());
  }
  if (doc.at("env_hash").get<std::string>() != mrdw::env_hash(env)) {
    throw StaleCache("cache was built for a different environment");
  }
  if (!(params_from_json(doc.at("params")) == params)) {
    throw StaleCache("cache was built with different skeleton parameters");
  }

  SkeletonGrid grid;
  grid.params_ = params;
  grid.env_hash_ = doc.at("env_hash").get<std::string>();
  grid.origin_ = {doc.at("origin")[0].get<double>(),
                  doc.at("origin")[1].get<double>()};
  grid.nx_ = doc.at("shape")[0].get<int>();
  grid.ny_ = doc.at("shape")[1].get<int>();
  grid.cells_ = doc.at("cells").get<std::vector<int>>();
  for (const json& p : doc.at("positions")) {
    grid.positions_.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  grid.orientations_ = skeleton_orientations(params.lambda);
  for (const json& t : doc.at("t_max")) grid.table_.push_back(time_from_json(t));
  for (const json& t : doc.at("escapability")) {
    grid.escapability_.push_back(time_from_json(t));
  }
  for (const json& t : doc.at("safety")) {
    grid.safety_.push_back(time_from_json(t));
  }
  const std::size_t n = grid.positions_.size();
  if (grid.cells_.size() != n || grid.table_.size() != n * grid.orientations_.size() ||
      grid.escapability_.size() != n || grid.safety_.size() != n) {
    throw StaleCache("cache tables have inconsistent sizes");
  }
  return grid;
}

}  // namespace mrdw
