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
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrdw/controller.hpp"
#include "mrdw/rng.hpp"

namespace mrdw {

class NumericalDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UserConfig {
  std::shared_ptr<const Room> room;
  double speed = 1.0;
  /// Fixed physical start pose; sampled uniformly over free space if absent.
  std::optional<Pose> start;
};

struct TargetSampling {
  double min_distance = 2.0;
  double max_distance = 6.0;
};

struct TrialConfig {
  Method method = Method::kOurs;
  std::vector<UserConfig> users;
  std::uint64_t seed = 0;
  /// A trial ends once every user has walked this far in the virtual world.
  double distance_threshold = 400.0;
  double dt = 0.01;
  double turn_rate = std::numbers::pi / 2.0;
  TargetSampling targets;
  ControllerParams controller;
  /// Abort once simulated time exceeds this many seconds per meter of
  /// threshold.
  double time_limit_factor = 50.0;
};

enum class UserMode { kWalking, kTurning };

struct UserState {
  Pose physical;
  Point2 virtual_position;
  double virtual_heading = 0.0;
  Point2 target;
  RedirectionCommand command;
  UserMode mode = UserMode::kWalking;
  double virtual_distance = 0.0;
  double physical_distance = 0.0;
  /// Signed rotation left in the current turn, radians.
  double turn_remaining = 0.0;
  /// Physical length left on the current path before it leaves free space.
  double hit_remaining = kInf;
  /// Physical length walked since the last virtual target was reached.
  double segment_physical = 0.0;
  double segment_virtual = 0.0;
  int waypoint = 0;
};

enum class TrialStatus { kOk, kDiverged, kTimeout };
std::string_view status_name(TrialStatus s);

struct TrialStats {
  std::uint64_t seed = 0;
  TrialStatus status = TrialStatus::kOk;
  std::string message;
  int common_resets = 0;
  std::vector<double> virtual_distance;
  std::vector<double> physical_distance;
  double sim_time = 0.0;
  double wall_ms = 0.0;
  /// Resets that followed a plan naming a bottleneck user.
  int planned_bottleneck_resets = 0;
  /// Of those, how many were triggered by that user.
  int bottleneck_trigger_matches = 0;
  /// Commands checked against the gain bounds, and failures.
  int commands_validated = 0;
  int command_violations = 0;
  std::vector<std::string> violation_samples;
};

/// Deterministic lock-step world of all users in one trial.
class Simulation {
 public:
  explicit Simulation(const TrialConfig& config);

  /// Advances simulated time by dt. Wall crossings, target arrivals and turn
  /// completions inside the step are handled at their exact times. Throws
  /// NumericalDivergence on non-finite state.
  void step(double dt);
  /// True once every user's virtual distance reaches the threshold.
  bool finished() const;
  void run();

  const std::vector<UserState>& users() const { return users_; }
  const TrialStats& stats() const { return stats_; }
  double time() const { return time_; }
  const RdwController& controller() const { return controller_; }
  /// Plan made at the most recent common reset (ours only).
  const std::optional<CommonResetPlan>& last_plan() const { return last_plan_; }
  /// Index of the user whose wall contact caused the most recent reset.
  std::optional<std::size_t> last_trigger() const { return last_trigger_; }
  /// Simulated time of the most recent common reset.
  double last_reset_time() const { return last_reset_time_; }

 private:
  UserPlanInput plan_input(std::size_t i) const;
  void apply(std::size_t i, const RedirectionCommand& cmd);
  void start_walking(std::size_t i);
  void sample_target(std::size_t i);
  void common_reset(std::size_t trigger);
  void update_baseline_steering();
  void reanchor(std::size_t i);
  void sync(double t);
  void check_finite() const;
  double next_event_time() const;
  double best_orientation(std::size_t i) const;

  TrialConfig config_;
  RdwController controller_;
  std::vector<UserState> users_;
  /// State of each user at its last event, and the time of that event.
  std::vector<UserState> anchors_;
  std::vector<double> anchor_time_;
  std::vector<Rng> rngs_;
  TrialStats stats_;
  double time_ = 0.0;
  std::optional<CommonResetPlan> last_plan_;
  std::optional<std::size_t> last_trigger_;
  double last_reset_time_ = 0.0;
  int zero_progress_resets_ = 0;
};

/// Kinematics of one user over dt: a walking user covers v dt virtually
/// and v dt / g_t physically along its commanded arc; a turning user rotates
/// both headings at turn_rate without translating.
void advance_user(UserState& u, double v, double dt, double turn_rate);

/// Runs one trial to completion. Divergence and timeouts are reported in
/// the status rather than thrown.
TrialStats run_trial(const TrialConfig& config);

/// Uniform rejection sample of a free pose in `env`.
Pose sample_free_pose(const PhysEnv& env, Rng& rng);

}  // namespace mrdw
