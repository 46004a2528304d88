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

#include <span>
#include <vector>

#include "mrdw/gaincurve.hpp"
#include "mrdw/geom.hpp"

namespace mrdw {

/// How long a user can walk from one pose along each scanning candidate.
struct HorizonReport {
  /// Physical arc length to the first obstacle, per candidate (may be inf).
  std::vector<double> lengths;
  /// lengths / v, seconds, before any translation gain.
  std::vector<double> times;
  /// max(times) * g_t_max.
  double t_max = 0.0;
  std::size_t best = 0;
  CurvatureCandidate best_candidate;
};

/// Candidate times closer than this are treated as tied.
inline constexpr double kTimeTieTolerance = 1e-9;

/// True if candidate `a` is preferred over `b` at equal time: gentler
/// curvature first (straight is the gentlest), then a left bend.
bool gentler(const CurvatureCandidate& a, const CurvatureCandidate& b);

/// Scans every candidate from `pose`. Throws PoseOutsideFreeSpace.
HorizonReport walk_times(const Pose& pose, double v, const PhysEnv& env,
                         std::span<const CurvatureCandidate> candidates,
                         const GainBounds& bounds);

struct OrientationScan {
  double best_heading = 0.0;
  std::size_t best_index = 0;
  /// Largest t_max over the scanned headings, seconds.
  double t_max = 0.0;
  /// Candidate attaining t_max at best_heading.
  CurvatureCandidate best_candidate;
};

/// Best reset heading at `position` among `orientations` (first one wins on
/// ties).
OrientationScan t_max_over_orientations(
    Point2 position, double v, const PhysEnv& env,
    std::span<const double> orientations,
    std::span<const CurvatureCandidate> candidates, const GainBounds& bounds);

/// {2*pi*i/lambda | i = 1..lambda}, normalized into [0, 2*pi).
std::vector<double> skeleton_orientations(int lambda);

}  // namespace mrdw
