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

#include "mrdw/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>

namespace mrdw {

namespace {

constexpr double kArrivalEps = 1e-9;
constexpr double kTurnEps = 1e-12;
constexpr int kMaxEventsPerStep = 100000;
constexpr int kMaxZeroProgressResets = 1000;
constexpr std::size_t kMaxViolationSamples = 8;

class TrialTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ArcPath path_of(const UserState& u) {
  return u.command.curvature.is_straight()
             ? ArcPath::straight(u.physical)
             : ArcPath::curved(u.physical, u.command.curvature.signed_radius());
}

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

std::string_view status_name(TrialStatus s) {
  switch (s) {
    case TrialStatus::kOk: return "ok";
    case TrialStatus::kDiverged: return "diverged";
    case TrialStatus::kTimeout: return "timeout";
  }
  return "?";
}

Pose sample_free_pose(const PhysEnv& env, Rng& rng) {
  const Box& b = env.bounds();
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const Point2 p{rng.uniform(b.min.x, b.max.x), rng.uniform(b.min.y, b.max.y)};
    const double heading = rng.uniform(0.0, kTwoPi);
    if (env.in_free_space(p) && env.wall_distance(p) > env.clearance() + 1e-6) {
      return Pose(p, heading);
    }
  }
  throw GeometryError("could not sample a free start pose");
}

Simulation::Simulation(const TrialConfig& config)
    : config_(config), controller_(config.controller) {
  if (config_.users.empty()) throw std::invalid_argument("trial has no users");
  if (!(config_.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(config_.targets.min_distance > 0.0) ||
      config_.targets.max_distance < config_.targets.min_distance) {
    throw std::invalid_argument("invalid target distance range");
  }
  stats_.seed = config_.seed;
  users_.resize(config_.users.size());
  anchors_.resize(users_.size());
  anchor_time_.assign(users_.size(), 0.0);
  for (std::size_t i = 0; i < users_.size(); ++i) {
    const UserConfig& uc = config_.users[i];
    if (!uc.room) throw std::invalid_argument("user has no room");
    if (!(uc.speed > 0.0)) throw std::invalid_argument("speed must be > 0");
    rngs_.emplace_back(config_.seed, i);
    UserState& u = users_[i];
    u.physical = uc.start ? *uc.start : sample_free_pose(uc.room->env, rngs_[i]);
    if (!uc.room->env.in_free_space(u.physical.position())) {
      throw PoseOutsideFreeSpace(u.physical.position());
    }
    sample_target(i);
    u.virtual_heading = angle_of(u.target - u.virtual_position);
    u.turn_remaining = 0.0;
    start_walking(i);
  }
  stats_.virtual_distance.assign(users_.size(), 0.0);
  stats_.physical_distance.assign(users_.size(), 0.0);
}

UserPlanInput Simulation::plan_input(std::size_t i) const {
  const UserState& u = users_[i];
  return {static_cast<int>(i), u.physical, u.virtual_position, u.target,
          config_.users[i].speed, config_.users[i].room.get()};
}

void Simulation::apply(std::size_t i, const RedirectionCommand& cmd) {
  const auto problems = validate(cmd, config_.controller.bounds);
  ++stats_.commands_validated;
  if (!problems.empty()) {
    ++stats_.command_violations;
    if (stats_.violation_samples.size() < kMaxViolationSamples) {
      stats_.violation_samples.push_back(
          fmt::format("user {} at t={:.3f}: {}", i, time_, problems.front()));
    }
  }
  UserState& u = users_[i];
  if (cmd.reset_heading) u.physical = Pose(u.physical.position(), *cmd.reset_heading);
  u.command = cmd;
  u.command.reset_heading.reset();
  u.hit_remaining = first_hit(path_of(u), config_.users[i].room->env);
  reanchor(i);
}

void Simulation::start_walking(std::size_t i) {
  UserState& u = users_[i];
  u.mode = UserMode::kWalking;
  u.turn_remaining = 0.0;
  if (config_.method == Method::kOurs) {
    apply(i, controller_.on_turn_complete(plan_input(i)));
    return;
  }
  const BaselineDecision d =
      baseline_step(config_.method, u.physical, config_.users[i].room->env,
                    config_.controller.baseline, config_.controller.bounds,
                    u.waypoint);
  u.waypoint = d.waypoint;
  RedirectionCommand cmd;
  cmd.curvature = d.curvature;
  cmd.g_t = 1.0;
  apply(i, cmd);
}

void Simulation::sample_target(std::size_t i) {
  UserState& u = users_[i];
  Rng& rng = rngs_[i];
  const double d =
      rng.uniform(config_.targets.min_distance, config_.targets.max_distance);
  const double bearing = rng.uniform(0.0, kTwoPi);
  u.target = u.virtual_position + unit_from_angle(bearing) * d;
}

double Simulation::best_orientation(std::size_t i) const {
  return t_max_over_orientations(
             users_[i].physical.position(), config_.users[i].speed,
             config_.users[i].room->env, controller_.orientations(),
             controller_.candidates(), config_.controller.bounds)
      .best_heading;
}

void Simulation::common_reset(std::size_t trigger) {
  ++stats_.common_resets;
  last_trigger_ = trigger;
  last_reset_time_ = time_;

  if (config_.method == Method::kOurs) {
    if (last_plan_ && last_plan_->bottleneck) {
      ++stats_.planned_bottleneck_resets;
      if (static_cast<std::size_t>(*last_plan_->bottleneck) == trigger) {
        ++stats_.bottleneck_trigger_matches;
      }
    }
    std::vector<UserPlanInput> inputs;
    for (std::size_t i = 0; i < users_.size(); ++i) {
      if (users_[i].mode == UserMode::kWalking) inputs.push_back(plan_input(i));
    }
    CommonResetPlan plan = controller_.plan_common_reset(inputs);
    for (const UserDecision& d : plan.decisions) {
      apply(static_cast<std::size_t>(d.id), d.command);
    }
    last_plan_ = std::move(plan);
    return;
  }

  for (std::size_t i = 0; i < users_.size(); ++i) {
    UserState& u = users_[i];
    if (u.mode != UserMode::kWalking) continue;
    double heading = 0.0;
    if (i == trigger) {
      const auto r2g =
          r2g_reset_heading(u.physical.position(), config_.users[i].room->env);
      heading = r2g ? *r2g : best_orientation(i);
    } else {
      heading = best_orientation(i);
    }
    const PhysEnv& env = config_.users[i].room->env;
    auto steer = [&](double h) {
      const Pose pose(u.physical.position(), h);
      return baseline_step(config_.method, pose, env, config_.controller.baseline,
                           config_.controller.bounds, u.waypoint);
    };
    auto length = [&](double h, const Curvature& c) {
      const Pose pose(u.physical.position(), h);
      return first_hit(c.is_straight() ? ArcPath::straight(pose)
                                       : ArcPath::curved(pose, c.signed_radius()),
                       env);
    };
    BaselineDecision d = steer(heading);
    // In a pinched pocket of free space the gradient heading can point
    // straight back out; fall back to the best skeleton orientation.
    if (!(length(heading, d.curvature) > kArrivalEps)) {
      heading = best_orientation(i);
      d = steer(heading);
    }
    u.waypoint = d.waypoint;
    RedirectionCommand cmd;
    cmd.reset_heading = heading;
    cmd.curvature = d.curvature;
    cmd.g_t = 1.0;
    apply(i, cmd);
  }
}

void Simulation::update_baseline_steering() {
  for (std::size_t i = 0; i < users_.size(); ++i) {
    UserState& u = users_[i];
    if (u.mode != UserMode::kWalking) continue;
    const BaselineDecision d =
        baseline_step(config_.method, u.physical, config_.users[i].room->env,
                      config_.controller.baseline, config_.controller.bounds,
                      u.waypoint);
    u.waypoint = d.waypoint;
    if (d.curvature == u.command.curvature) continue;
    RedirectionCommand cmd;
    cmd.curvature = d.curvature;
    cmd.g_t = 1.0;
    apply(i, cmd);
  }
}

void advance_user(UserState& u, double v, double dt, double turn_rate) {
  if (u.mode == UserMode::kWalking) {
    const double step = v * dt;
    const Vec2 to_target = u.target - u.virtual_position;
    const double left = norm(to_target);
    if (step >= left - kArrivalEps) {
      u.virtual_position = u.target;
    } else {
      u.virtual_position = u.virtual_position + to_target * (step / left);
    }
    u.virtual_distance += step;
    u.segment_virtual += step;
    const double phys = step / u.command.g_t;
    u.physical = path_of(u).pose_at(phys);
    u.hit_remaining -= phys;
    u.physical_distance += phys;
    u.segment_physical += phys;
  } else {
    const double turn = std::copysign(
        std::min(std::abs(u.turn_remaining), turn_rate * dt), u.turn_remaining);
    u.turn_remaining -= turn;
    u.virtual_heading = normalize_angle(u.virtual_heading + turn);
    u.physical = Pose(u.physical.position(), u.physical.heading() + turn);
  }
}

void Simulation::reanchor(std::size_t i) {
  anchors_[i] = users_[i];
  anchor_time_[i] = time_;
}

void Simulation::sync(double t) {
  for (std::size_t i = 0; i < users_.size(); ++i) {
    users_[i] = anchors_[i];
    advance_user(users_[i], config_.users[i].speed, t - anchor_time_[i],
                 config_.turn_rate);
  }
}

double Simulation::next_event_time() const {
  double t = kInf;
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    const UserState& u = anchors_[i];
    const double v = config_.users[i].speed;
    double d = 0.0;
    if (u.mode == UserMode::kWalking) {
      d = std::min(distance(u.virtual_position, u.target) / v,
                   u.hit_remaining * u.command.g_t / v);
    } else {
      d = std::abs(u.turn_remaining) / config_.turn_rate;
    }
    t = std::min(t, anchor_time_[i] + d);
  }
  return t;
}

void Simulation::step(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (config_.method != Method::kOurs) update_baseline_steering();

  // Users move along closed-form paths from their last event, so event
  // times do not depend on how simulated time is sliced into steps.
  const double end = time_ + dt;
  for (int events = 0;; ++events) {
    if (events > kMaxEventsPerStep) {
      throw NumericalDivergence("event storm: simulation makes no progress");
    }
    const double te = next_event_time();
    if (!(te <= end)) break;
    const bool progressed = te > time_;
    time_ = std::max(time_, te);
    sync(time_);

    for (std::size_t i = 0; i < users_.size(); ++i) {
      UserState& u = users_[i];
      if (u.mode == UserMode::kWalking &&
          distance(u.virtual_position, u.target) <= kArrivalEps) {
        u.virtual_position = u.target;
        u.segment_physical = u.segment_virtual = 0.0;
        sample_target(i);
        const double bearing = angle_of(u.target - u.virtual_position);
        u.turn_remaining = wrap_pi(bearing - u.virtual_heading);
        u.mode = UserMode::kTurning;
        reanchor(i);
      }
    }
    for (std::size_t i = 0; i < users_.size(); ++i) {
      UserState& u = users_[i];
      if (u.mode == UserMode::kTurning && std::abs(u.turn_remaining) <= kTurnEps) {
        u.virtual_heading = normalize_angle(angle_of(u.target - u.virtual_position));
        start_walking(i);
      }
    }
    for (std::size_t i = 0; i < users_.size(); ++i) {
      UserState& u = users_[i];
      if (u.mode == UserMode::kWalking && u.hit_remaining <= kArrivalEps) {
        zero_progress_resets_ = progressed ? 0 : zero_progress_resets_ + 1;
        if (zero_progress_resets_ > kMaxZeroProgressResets) {
          throw NumericalDivergence(fmt::format(
              "repeated resets without progress: user {} at ({:.4f}, {:.4f}) "
              "heading {:.4f}",
              i, u.physical.position().x, u.physical.position().y,
              u.physical.heading()));
        }
        common_reset(i);
        break;
      }
    }
    check_finite();
  }

  time_ = end;
  sync(time_);
  check_finite();
  for (std::size_t i = 0; i < users_.size(); ++i) {
    stats_.virtual_distance[i] = users_[i].virtual_distance;
    stats_.physical_distance[i] = users_[i].physical_distance;
  }
  stats_.sim_time = time_;
}

void Simulation::check_finite() const {
  for (const UserState& u : users_) {
    if (!finite(u.physical.position()) || !finite(u.virtual_position) ||
        !std::isfinite(u.physical.heading())) {
      throw NumericalDivergence(fmt::format("non-finite state at t={}", time_));
    }
  }
}

bool Simulation::finished() const {
  return std::all_of(users_.begin(), users_.end(), [&](const UserState& u) {
    return u.virtual_distance >= config_.distance_threshold;
  });
}

void Simulation::run() {
  double min_speed = kInf;
  for (const UserConfig& u : config_.users) min_speed = std::min(min_speed, u.speed);
  const double limit =
      config_.time_limit_factor * std::max(1.0, config_.distance_threshold) / min_speed;
  while (!finished()) {
    step(config_.dt);
    if (time_ > limit) {
      throw TrialTimeout(fmt::format("simulated time exceeded {} s", limit));
    }
  }
}

TrialStats run_trial(const TrialConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Simulation sim(config);
  TrialStats stats;
  try {
    sim.run();
    stats = sim.stats();
  } catch (const NumericalDivergence& e) {
    stats = sim.stats();
    stats.status = TrialStatus::kDiverged;
    stats.message = e.what();
  } catch (const TrialTimeout& e) {
    stats = sim.stats();
    stats.status = TrialStatus::kTimeout;
    stats.message = e.what();
  }
  stats.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return stats;
}

}  // namespace mrdw
