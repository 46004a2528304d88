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

#include "mrdw/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mrdw {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kOurs: return "ours";
    case Method::kS2C: return "s2c";
    case Method::kS2O: return "s2o";
    case Method::kZigZag: return "zigzag";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::kOurs, Method::kS2C, Method::kS2O, Method::kZigZag}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view role_name(PlanRole r) {
  switch (r) {
    case PlanRole::kWalkLongest: return "walk_longest";
    case PlanRole::kGotoMaxL: return "goto_max_l";
    case PlanRole::kGotoMaxH: return "goto_max_h";
    case PlanRole::kFallbackLongest: return "fallback_longest";
  }
  return "?";
}

RdwController::RdwController(ControllerParams params)
    : params_(std::move(params)),
      candidates_(candidate_paths(params_.k, params_.bounds)),
      orientations_(skeleton_orientations(params_.lambda)) {
  if (auto err = params_.bounds.check()) throw std::invalid_argument(*err);
}

UserAnalysis RdwController::analyze(const UserPlanInput& user) const {
  if (user.room == nullptr) throw std::invalid_argument("user has no room");
  if (!(user.speed > 0.0)) throw std::invalid_argument("speed must be > 0");
  UserAnalysis a;
  a.tau = distance(user.virtual_position, user.target) / user.speed;
  const OrientationScan scan = t_max_over_orientations(
      user.physical.position(), user.speed, user.room->env, orientations_,
      candidates_, params_.bounds);
  a.pi = scan.t_max;
  a.best_reset_heading = scan.best_heading;
  a.best_candidate = scan.best_candidate;
  a.safety = a.pi >= a.tau ? SafetyClass::kSafe : SafetyClass::kUnsafe;
  return a;
}

RedirectionCommand RdwController::walk_longest(const UserAnalysis& a) const {
  RedirectionCommand cmd;
  cmd.reset_heading = a.best_reset_heading;
  cmd.curvature = a.best_candidate.curvature;
  cmd.g_t = params_.bounds.g_t_max;
  return cmd;
}

RedirectionCommand RdwController::on_turn_complete(
    const UserPlanInput& user) const {
  const HorizonReport r = walk_times(user.physical, user.speed,
                                     user.room->env, candidates_,
                                     params_.bounds);
  RedirectionCommand cmd;
  cmd.curvature = r.best_candidate.curvature;
  cmd.g_t = params_.bounds.g_t_max;
  return cmd;
}

UserDecision RdwController::goto_best(const UserPlanInput& user,
                                      const UserAnalysis& a, double budget,
                                      PlanRole role) const {
  UserDecision d;
  d.id = user.id;
  d.analysis = a;
  d.budget = budget;
  const SkeletonGrid& grid = user.room->grid;
  const auto reachable = reachable_skeleton_positions(
      user.physical.position(), budget, user.speed, user.room->env, grid,
      params_.reach);
  if (reachable.empty()) {
    d.role = PlanRole::kFallbackLongest;
    d.command = walk_longest(a);
    return d;
  }

  auto score = [&](std::size_t i) {
    return role == PlanRole::kGotoMaxL ? grid.escapability(i)
                                       : grid.safety(i);
  };
  const Point2 p = user.physical.position();
  const ReachableSkeletonPosition* best = &reachable.front();
  for (const auto& cand : reachable) {
    const double sc = score(cand.index);
    const double sb = score(best->index);
    const bool tie = (std::isinf(sc) && sc == sb) ||
                     std::abs(sc - sb) <= kTimeTieTolerance;
    if (tie) {
      const double dc = distance(p, grid.positions()[cand.index]);
      const double db = distance(p, grid.positions()[best->index]);
      if (dc < db || (dc == db && cand.index < best->index)) best = &cand;
    } else if (sc > sb) {
      best = &cand;
    }
  }
  d.role = role;
  d.command = best->plan.command;
  d.destination = best->index;
  return d;
}

CommonResetPlan RdwController::plan_common_reset(
    std::span<const UserPlanInput> users) const {
  if (users.empty()) throw std::invalid_argument("no users to plan for");
  std::vector<UserAnalysis> analyses;
  analyses.reserve(users.size());
  for (const UserPlanInput& u : users) analyses.push_back(analyze(u));

  CommonResetPlan plan;
  std::optional<std::size_t> star;
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (analyses[i].safety != SafetyClass::kUnsafe) continue;
    if (!star || analyses[i].pi < analyses[*star].pi ||
        (analyses[i].pi == analyses[*star].pi && users[i].id < users[*star].id)) {
      star = i;
    }
  }
  if (star) {
    plan.bottleneck = users[*star].id;
    plan.bottleneck_time = analyses[*star].pi;
  }

  plan.decisions.resize(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    const UserAnalysis& a = analyses[i];
    UserDecision& d = plan.decisions[i];
    if (star && i == *star) {
      d.id = users[i].id;
      d.role = PlanRole::kWalkLongest;
      d.analysis = a;
      d.budget = a.pi;
      d.command = walk_longest(a);
    } else if (a.tau > plan.bottleneck_time) {
      d = goto_best(users[i], a, plan.bottleneck_time, PlanRole::kGotoMaxL);
    } else {
      d = goto_best(users[i], a, a.tau, PlanRole::kGotoMaxH);
    }
  }
  return plan;
}

namespace {

Curvature steer_toward(double desired, const Pose& pose,
                       const BaselineParams& params, const GainBounds& bounds) {
  const double error = wrap_pi(desired - pose.heading());
  const double deadband = params.deadband_deg * std::numbers::pi / 180.0;
  if (std::abs(error) <= deadband) return Curvature::straight();
  return Curvature::radius(error > 0.0 ? bounds.radius_min
                                       : -bounds.radius_min);
}

// Of two candidate directions, the one needing the smaller turn.
double closer_direction(double a, double b, double heading) {
  return std::abs(wrap_pi(a - heading)) <= std::abs(wrap_pi(b - heading)) ? a
                                                                           : b;
}

}  // namespace

std::pair<Point2, Point2> zigzag_waypoints(const PhysEnv& env,
                                           const BaselineParams& params) {
  const Box& b = env.bounds();
  const Point2 c = b.center();
  if (b.width() >= b.height()) {
    return {{b.min.x + params.zigzag_first * b.width(), c.y},
            {b.min.x + params.zigzag_second * b.width(), c.y}};
  }
  return {{c.x, b.min.y + params.zigzag_first * b.height()},
          {c.x, b.min.y + params.zigzag_second * b.height()}};
}

BaselineDecision baseline_step(Method method, const Pose& physical,
                               const PhysEnv& env, const BaselineParams& params,
                               const GainBounds& bounds, int waypoint) {
  BaselineDecision out;
  out.waypoint = waypoint;
  const Point2 p = physical.position();
  switch (method) {
    case Method::kS2C: {
      const Vec2 to_center = env.centroid() - p;
      if (norm(to_center) <= params.center_tolerance) return out;
      out.curvature =
          steer_toward(angle_of(to_center), physical, params, bounds);
      return out;
    }
    case Method::kS2O: {
      const Point2 c = env.centroid();
      const double orbit =
          params.orbit_fraction * 0.5 *
          std::min(env.bounds().width(), env.bounds().height());
      const Vec2 rel = p - c;
      const double d = norm(rel);
      if (d == 0.0) return out;
      double desired = 0.0;
      if (d <= orbit * (1.0 + 1e-9)) {
        desired = closer_direction(angle_of(perp(rel)), angle_of(-perp(rel)),
                                   physical.heading());
      } else {
        const double beta = std::acos(orbit / d);
        const double base = angle_of(rel);
        const Point2 t1 = c + unit_from_angle(base + beta) * orbit;
        const Point2 t2 = c + unit_from_angle(base - beta) * orbit;
        desired = closer_direction(angle_of(t1 - p), angle_of(t2 - p),
                                   physical.heading());
      }
      out.curvature = steer_toward(desired, physical, params, bounds);
      return out;
    }
    case Method::kZigZag: {
      const auto [w0, w1] = zigzag_waypoints(env, params);
      Point2 goal = waypoint == 0 ? w0 : w1;
      if (distance(p, goal) < params.zigzag_switch_distance) {
        out.waypoint = 1 - waypoint;
        goal = out.waypoint == 0 ? w0 : w1;
      }
      out.curvature = steer_toward(angle_of(goal - p), physical, params, bounds);
      return out;
    }
    case Method::kOurs:
      break;
  }
  throw std::invalid_argument("baseline_step called for a non-baseline method");
}

std::optional<double> r2g_reset_heading(Point2 position, const PhysEnv& env) {
  Vec2 sum{};
  for (const Segment& w : env.walls()) {
    const Point2 closest = closest_point_on_segment(position, w);
    Vec2 away = position - closest;
    double d = norm(away);
    if (d < kGeomEps) {
      const Vec2 e = w.b - w.a;
      away = perp(e) / norm(e);
      d = kGeomEps;
    } else {
      away = away / d;
    }
    sum = sum + away / (d * d);
  }
  // Contributions are >= 1/diam^2 each, so compare relative to their scale.
  double scale = 0.0;
  for (const Segment& w : env.walls()) {
    const double d = std::max(point_segment_distance(position, w), kGeomEps);
    scale += 1.0 / (d * d);
  }
  if (norm(sum) <= 1e-9 * scale) return std::nullopt;
  return normalize_angle(angle_of(sum));
}

}  // namespace mrdw
