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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrdw/gaincurve.hpp"
#include "mrdw/geom.hpp"

namespace mrdw {

struct SkeletonParams {
  /// Grid spacing, meters.
  double delta = 0.5;
  /// Number of skeleton orientations.
  int lambda = 30;
  /// Curvature candidate pairs.
  int k = 10;
  GainBounds bounds;

  bool operator==(const SkeletonParams& o) const;
};

class EmptyFreeSpace : public std::runtime_error {
 public:
  EmptyFreeSpace() : std::runtime_error("no skeleton position lies in free space") {}
};

class StaleCache : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stable hash of an environment's normalized geometry and clearance.
std::string env_hash(const PhysEnv& env);

/// Precomputed walking-time field over the skeleton poses of one room.
///
/// Times are stored for a walking speed of 1 m/s; every accessor takes the
/// user's speed and rescales, since all times are proportional to 1/v.
class SkeletonGrid {
 public:
  /// Grid square centers in free space, row-major from the bounding box
  /// minimum corner. Throws EmptyFreeSpace. `threads == 0` uses the hardware
  /// concurrency; the result does not depend on it.
  static SkeletonGrid build(const PhysEnv& env, const SkeletonParams& params,
                            unsigned threads = 1);

  const SkeletonParams& params() const { return params_; }
  const std::string& env_hash() const { return env_hash_; }
  std::size_t size() const { return positions_.size(); }
  const std::vector<Point2>& positions() const { return positions_; }
  const std::vector<double>& orientations() const { return orientations_; }

  double t_max(std::size_t position, std::size_t orientation,
               double v = 1.0) const {
    return table_[position * orientations_.size() + orientation] / v;
  }
  /// Escapability: best t_max over all orientations.
  double escapability(std::size_t position, double v = 1.0) const {
    return escapability_[position] / v;
  }
  /// Safety: harmonic mean of t_max over all orientations.
  double safety(std::size_t position, double v = 1.0) const {
    return safety_[position] / v;
  }
  /// Index of the skeleton position whose grid square contains p, or
  /// size() if that square is not a skeleton position.
  std::size_t cell_of(Point2 p) const;

  void save(const std::filesystem::path& path) const;
  /// Throws StaleCache when the file was built for another environment or
  /// other parameters.
  static SkeletonGrid load(const std::filesystem::path& path,
                           const PhysEnv& env, const SkeletonParams& params);

  bool operator==(const SkeletonGrid&) const = default;

 private:
  SkeletonParams params_;
  std::string env_hash_;
  Point2 origin_{};
  int nx_ = 0;
  int ny_ = 0;
  std::vector<Point2> positions_;
  std::vector<int> cells_;
  std::vector<double> orientations_;
  std::vector<double> table_;
  std::vector<double> escapability_;
  std::vector<double> safety_;
};

/// lambda / sum(1 / t) with extended-real conventions: a zero term gives 0,
/// infinite terms contribute nothing.
double harmonic_mean(std::span<const double> values);

}  // namespace mrdw
