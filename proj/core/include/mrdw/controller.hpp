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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrdw/gaincurve.hpp"
#include "mrdw/geom.hpp"
#include "mrdw/horizon.hpp"
#include "mrdw/reach.hpp"
#include "mrdw/skeleton.hpp"

namespace mrdw {

/// A physical room with its precomputed skeleton field.
struct Room {
  PhysEnv env;
  SkeletonGrid grid;
};

enum class Method { kOurs, kS2C, kS2O, kZigZag };

std::string_view method_name(Method m);
/// Parses "ours", "s2c", "s2o" or "zigzag".
std::optional<Method> parse_method(std::string_view name);
inline constexpr std::string_view kSupportedMethods = "ours, s2c, s2o, zigzag";

/// Steering-loop constants for the baseline controllers.
struct BaselineParams {
  double deadband_deg = 10.0;
  /// S2C goes straight when this close to the room centroid, meters.
  double center_tolerance = 0.1;
  /// Orbit radius as a fraction of the smaller half extent of the room.
  double orbit_fraction = 0.4;
  /// ZigZag waypoints as fractions along the room's long axis.
  double zigzag_first = 0.3;
  double zigzag_second = 0.7;
  /// Distance at which ZigZag switches to the other waypoint, meters.
  double zigzag_switch_distance = 0.5;
};

struct ControllerParams {
  GainBounds bounds;
  int k = 10;
  int lambda = 30;
  ReachOptions reach;
  BaselineParams baseline;
};

/// Snapshot of one walking user handed to the planner. `room` is
/// non-owning and must outlive the call.
struct UserPlanInput {
  int id = 0;
  Pose physical;
  Point2 virtual_position;
  Point2 target;
  double speed = 1.0;
  const Room* room = nullptr;
};

enum class SafetyClass { kSafe, kUnsafe };

struct UserAnalysis {
  /// Virtual time left to the current target, seconds.
  double tau = 0.0;
  /// Longest walking time after a reset to the best skeleton orientation.
  double pi = 0.0;
  double best_reset_heading = 0.0;
  CurvatureCandidate best_candidate;
  SafetyClass safety = SafetyClass::kSafe;
};

enum class PlanRole { kWalkLongest, kGotoMaxL, kGotoMaxH, kFallbackLongest };
std::string_view role_name(PlanRole r);

struct UserDecision {
  int id = 0;
  PlanRole role = PlanRole::kWalkLongest;
  RedirectionCommand command;
  UserAnalysis analysis;
  /// Time budget the destination was planned for (GOTO roles).
  double budget = 0.0;
  /// Chosen skeleton position (GOTO roles).
  std::optional<std::size_t> destination;
};

struct CommonResetPlan {
  std::optional<int> bottleneck;
  /// Infinite when every user is safe.
  double bottleneck_time = kInf;
  /// Same order as the input users.
  std::vector<UserDecision> decisions;
};

/// Coordinated multi-user reset planner. Stateless after construction.
class RdwController {
 public:
  explicit RdwController(ControllerParams params);

  const ControllerParams& params() const { return params_; }
  std::span<const CurvatureCandidate> candidates() const { return candidates_; }
  std::span<const double> orientations() const { return orientations_; }

  UserAnalysis analyze(const UserPlanInput& user) const;

  /// Bottleneck selection and per-user reset plans for one common reset.
  CommonResetPlan plan_common_reset(std::span<const UserPlanInput> users) const;

  /// Command for a user who just turned toward a new target: keep the
  /// heading, take the longest-walking candidate at the largest gain.
  RedirectionCommand on_turn_complete(const UserPlanInput& user) const;

  /// Reset to the best skeleton orientation and walk the longest candidate.
  RedirectionCommand walk_longest(const UserAnalysis& analysis) const;

 private:
  UserDecision goto_best(const UserPlanInput& user, const UserAnalysis& a,
                         double budget, PlanRole role) const;

  ControllerParams params_;
  std::vector<CurvatureCandidate> candidates_;
  std::vector<double> orientations_;
};

struct BaselineDecision {
  Curvature curvature = Curvature::straight();
  /// ZigZag waypoint to aim at next (0 or 1); unchanged for other methods.
  int waypoint = 0;
};

/// One steering update of S2C, S2O or ZigZag. Translation gain is always 1.
BaselineDecision baseline_step(Method method, const Pose& physical,
                               const PhysEnv& env, const BaselineParams& params,
                               const GainBounds& bounds, int waypoint = 0);

/// The two ZigZag waypoints of a room.
std::pair<Point2, Point2> zigzag_waypoints(const PhysEnv& env,
                                           const BaselineParams& params);

/// Reset-to-gradient heading: direction of the sum over all walls of the
/// unit vector away from the nearest wall point, weighted by 1/d^2. Empty
/// when that sum vanishes.
std::optional<double> r2g_reset_heading(Point2 position, const PhysEnv& env);

}  // namespace mrdw
