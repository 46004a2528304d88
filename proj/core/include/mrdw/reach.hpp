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

#include <optional>
#include <stdexcept>
#include <vector>

#include "mrdw/gaincurve.hpp"
#include "mrdw/geom.hpp"
#include "mrdw/skeleton.hpp"

namespace mrdw {

/// Physical displacements attainable in exactly T seconds after a reset.
struct ReachAnnulus {
  /// Chord of an arc of length s_near at the minimum curvature radius (at
  /// the arc_radius_floor once that arc would pass a half turn).
  double s_min = 0.0;
  /// v T / g_t_max: straight walk at the largest translation gain.
  double s_near = 0.0;
  /// v T / g_t_min: straight walk at the smallest translation gain.
  double s_max = 0.0;
};

ReachAnnulus annulus(double T, double v, const GainBounds& bounds);

class OutOfDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Smallest admissible radius for the arc branch. Equal to radius_min
/// unless an arc of length s_near at that radius would pass a half turn.
double arc_radius_floor(double s_near, const GainBounds& bounds);

/// Radius R' >= radius_min whose arc of length s_near has chord s. Solved
/// by bisection on the chord function, which is increasing in R'. Throws
/// OutOfDomain unless s lies in [chord at the floor radius, s_near).
double solve_radius(double s, double T, double v, const GainBounds& bounds);

/// Like solve_radius, but restricted to the discrete scanning radii
/// |alpha_i| * radius_min: returns the one whose chord is nearest s.
double solve_radius_discrete(double s, double T, double v,
                             const GainBounds& bounds, int k);

struct ReachOptions {
  /// Restrict arc radii to the scanning candidates instead of solving
  /// exactly. Plans then land near, not on, the queried point.
  bool discrete_radius = false;
  int k = 10;
};

/// A single reset plus constant-gain segment that lands on `target` after
/// `arrival_time` seconds.
struct ReachPlan {
  Point2 target;
  RedirectionCommand command;
  double arrival_time = 0.0;
  /// Physical path length, meters.
  double path_length = 0.0;
};

/// Plans a reset at p followed by one segment reaching q at time T.
/// Returns nothing if q is outside the annulus or every path is blocked.
std::optional<ReachPlan> plan_to(Point2 p, Point2 q, double T, double v,
                                 const PhysEnv& env, const GainBounds& bounds,
                                 const ReachOptions& options = {});

struct ReachableSkeletonPosition {
  std::size_t index = 0;
  ReachPlan plan;
};

/// Every skeleton position reachable from p at time T, in grid order.
std::vector<ReachableSkeletonPosition> reachable_skeleton_positions(
    Point2 p, double T, double v, const PhysEnv& env, const SkeletonGrid& grid,
    const ReachOptions& options = {});

}  // namespace mrdw
