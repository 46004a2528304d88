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

#include <doctest.h>

#include "mrdw/controller.hpp"
#include "mrdw/env_io.hpp"
#include "oracle.hpp"

using namespace mrdw;

namespace {

const Room& square_room() {
  static const Room room{rectangle_env(5, 5, 0.2),
                         SkeletonGrid::build(rectangle_env(5, 5, 0.2), SkeletonParams{})};
  return room;
}

// A user whose Pi and tau come out at exactly the requested values, by
// choosing the speed and the target distance.
UserPlanInput user_with(const RdwController& c, int id, Point2 p, double pi, double tau) {
  UserPlanInput u{id, Pose(p, 0.3), {0, 0}, {0, 0}, 1.0, &square_room()};
  const double pi_at_unit_speed = c.analyze(u).pi;
  u.speed = pi_at_unit_speed / pi;
  u.target = {tau * u.speed, 0.0};
  return u;
}

// Re-scan a reachable set for the best score, returning the best value.
double best_score(const UserPlanInput& u, double budget, bool use_l, const RdwController& c) {
  const auto reach = reachable_skeleton_positions(u.physical.position(), budget, u.speed,
                                                  u.room->env, u.room->grid, c.params().reach);
  double best = -1.0;
  for (const auto& r : reach) {
    best = std::max(best, use_l ? u.room->grid.escapability(r.index, u.speed)
                                : u.room->grid.safety(r.index, u.speed));
  }
  return best;
}

double score_of(const UserDecision& d, const UserPlanInput& u) {
  return d.role == PlanRole::kGotoMaxL ? u.room->grid.escapability(*d.destination, u.speed)
                                       : u.room->grid.safety(*d.destination, u.speed);
}

}  // namespace

TEST_CASE("method names") {
  for (Method m : {Method::kOurs, Method::kS2C, Method::kS2O, Method::kZigZag}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK_FALSE(parse_method("dapf"));
}

TEST_CASE("safety classification") {
  const RdwController c{ControllerParams{}};
  CHECK(c.analyze(user_with(c, 1, {0.3, -0.4}, 5, 4)).safety == SafetyClass::kSafe);
  CHECK(c.analyze(user_with(c, 1, {0.3, -0.4}, 3, 10)).safety == SafetyClass::kUnsafe);
  const UserAnalysis same = c.analyze(user_with(c, 1, {0.3, -0.4}, 3, 3));
  CHECK(same.safety == SafetyClass::kSafe);
  UserPlanInput here{1, Pose({1, 1}, 2.0), {4, 4}, {4, 4}, 1.0, &square_room()};
  const UserAnalysis at_target = c.analyze(here);
  CHECK(at_target.tau == 0.0);
  CHECK(at_target.safety == SafetyClass::kSafe);
}

TEST_CASE("hand-traced two-user plan") {
  const RdwController c{ControllerParams{}};
  const std::vector<UserPlanInput> users{user_with(c, 1, {0.3, -0.4}, 5, 4),
                                         user_with(c, 2, {-1.1, 0.9}, 3, 10)};
  const CommonResetPlan plan = c.plan_common_reset(users);
  REQUIRE(plan.bottleneck);
  CHECK(*plan.bottleneck == 2);
  CHECK(plan.bottleneck_time == doctest::Approx(3.0).epsilon(1e-12));
  REQUIRE(plan.decisions.size() == 2);

  const UserDecision& walker = plan.decisions[1];
  CHECK(walker.role == PlanRole::kWalkLongest);
  REQUIRE(walker.command.reset_heading);
  CHECK(*walker.command.reset_heading == walker.analysis.best_reset_heading);
  CHECK(walker.command.g_t == 1.26);
  CHECK(walker.command.curvature == walker.analysis.best_candidate.curvature);
  // The walker's horizon along its command is exactly the bottleneck time.
  const HorizonReport rep = walk_times(Pose(users[1].physical.position(), *walker.command.reset_heading),
                                       users[1].speed, square_room().env, c.candidates(),
                                       c.params().bounds);
  CHECK(rep.t_max == doctest::Approx(3.0).epsilon(1e-12));

  const UserDecision& mover = plan.decisions[0];
  CHECK(mover.role == PlanRole::kGotoMaxL);
  CHECK(mover.budget == plan.bottleneck_time);
  REQUIRE(mover.destination);
  CHECK(score_of(mover, users[0]) >= best_score(users[0], 3.0, true, c) - 1e-9);
  for (const UserDecision& d : plan.decisions) CHECK(validate(d.command, c.params().bounds).empty());
}

TEST_CASE("all users safe") {
  const RdwController c{ControllerParams{}};
  const std::vector<UserPlanInput> users{user_with(c, 1, {0.3, -0.4}, 5, 4),
                                         user_with(c, 2, {-1.1, 0.9}, 6, 2.5)};
  const CommonResetPlan plan = c.plan_common_reset(users);
  CHECK_FALSE(plan.bottleneck);
  CHECK(std::isinf(plan.bottleneck_time));
  for (std::size_t i = 0; i < 2; ++i) {
    const UserDecision& d = plan.decisions[i];
    CHECK(d.role == PlanRole::kGotoMaxH);
    CHECK(d.budget == doctest::Approx(i == 0 ? 4.0 : 2.5).epsilon(1e-12));
    REQUIRE(d.destination);
    CHECK(score_of(d, users[i]) >= best_score(users[i], d.budget, false, c) - 1e-9);
  }
}

TEST_CASE("a lone unsafe user is its own bottleneck") {
  const RdwController c{ControllerParams{}};
  const std::vector<UserPlanInput> users{user_with(c, 7, {0.3, -0.4}, 2, 9)};
  const CommonResetPlan plan = c.plan_common_reset(users);
  REQUIRE(plan.bottleneck);
  CHECK(*plan.bottleneck == 7);
  CHECK(plan.decisions[0].role == PlanRole::kWalkLongest);
}

TEST_CASE("unreachable skeleton falls back to walking longest") {
  const RdwController c{ControllerParams{}};
  // Budget far too small to reach any cell center at distance >= S_min.
  const std::vector<UserPlanInput> users{user_with(c, 1, {0.3, -0.4}, 1e-4, 1e-3),
                                         user_with(c, 2, {-0.25, -0.25}, 5, 1e-6)};
  const CommonResetPlan plan = c.plan_common_reset(users);
  CHECK(plan.decisions[0].role == PlanRole::kWalkLongest);
  // tau is tiny and no cell center sits at exactly that reachable distance.
  CHECK(plan.decisions[1].role == PlanRole::kFallbackLongest);
  CHECK(plan.decisions[1].command.reset_heading);
}

TEST_CASE("bottleneck optimality and speed invariance on random snapshots") {
  const RdwController c{ControllerParams{}};
  Rng rng(31, 0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<UserPlanInput> users;
    const int n = 2 + trial % 5;
    for (int i = 0; i < n; ++i) {
      const Point2 p = oracle::random_free_point(rng, square_room().env);
      users.push_back({i, Pose(p, rng.uniform(0, kTwoPi)), {0, 0},
                       {rng.uniform(-6, 6), rng.uniform(-6, 6)}, 1.0, &square_room()});
    }
    const CommonResetPlan plan = c.plan_common_reset(users);
    int unsafe = 0;
    for (const UserDecision& d : plan.decisions) {
      CHECK(validate(d.command, c.params().bounds).empty());
      if (d.analysis.safety == SafetyClass::kUnsafe) {
        ++unsafe;
        CHECK(d.analysis.pi >= plan.bottleneck_time);
      }
      if (d.role == PlanRole::kGotoMaxL || d.role == PlanRole::kGotoMaxH) {
        const UserPlanInput& u = users[static_cast<std::size_t>(d.id)];
        CHECK(score_of(d, u) >= best_score(u, d.budget, d.role == PlanRole::kGotoMaxL, c) - 1e-9);
      }
    }
    CHECK(plan.bottleneck.has_value() == (unsafe > 0));

    std::vector<UserPlanInput> faster = users;
    for (UserPlanInput& u : faster) u.speed = 1.7;
    const CommonResetPlan fast = c.plan_common_reset(faster);
    CHECK(fast.bottleneck == plan.bottleneck);
    for (std::size_t i = 0; i < users.size(); ++i) {
      CHECK(fast.decisions[i].analysis.safety == plan.decisions[i].analysis.safety);
      CHECK(fast.decisions[i].analysis.pi ==
            doctest::Approx(plan.decisions[i].analysis.pi / 1.7).epsilon(1e-12));
    }
  }
}

TEST_CASE("ties in the bottleneck go to the lowest id") {
  const RdwController c{ControllerParams{}};
  const std::vector<UserPlanInput> users{user_with(c, 4, {0.3, -0.4}, 3, 10),
                                         user_with(c, 2, {0.3, -0.4}, 3, 10)};
  const CommonResetPlan plan = c.plan_common_reset(users);
  REQUIRE(plan.bottleneck);
  CHECK(*plan.bottleneck == 2);
}

TEST_CASE("turn completion keeps the heading and takes the longest candidate") {
  const RdwController c{ControllerParams{}};
  Rng rng(32, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const Pose pose(oracle::random_free_point(rng, square_room().env), rng.uniform(0, kTwoPi));
    const UserPlanInput u{0, pose, {0, 0}, {3, 0}, 1.0, &square_room()};
    const RedirectionCommand cmd = c.on_turn_complete(u);
    CHECK_FALSE(cmd.reset_heading);
    CHECK(cmd.g_t == 1.26);
    double best = 0.0;
    for (const CurvatureCandidate& cand : c.candidates()) {
      const double l = cand.curvature.is_straight()
                           ? first_hit_straight(pose, square_room().env)
                           : first_hit_arc(pose, cand.curvature.signed_radius(), square_room().env);
      best = std::max(best, l);
    }
    const double chosen = cmd.curvature.is_straight()
                              ? first_hit_straight(pose, square_room().env)
                              : first_hit_arc(pose, cmd.curvature.signed_radius(), square_room().env);
    CHECK(chosen == best);
  }
  const UserPlanInput wall{0, Pose({2.3, 0}, 0.5 * M_PI + 0.05), {0, 0}, {3, 0}, 1.0, &square_room()};
  CHECK_FALSE(c.on_turn_complete(wall).curvature.is_straight());
  const UserPlanInput center{0, Pose({0, 0}, 0), {0, 0}, {3, 0}, 1.0, &square_room()};
  CHECK(c.on_turn_complete(center).curvature.signed_radius() == 7.5);
}

TEST_CASE("S2C steering") {
  const PhysEnv env = rectangle_env(5, 5, 0.2);
  const BaselineParams bp;
  const GainBounds gb;
  CHECK(baseline_step(Method::kS2C, Pose({0, 0}, 1.0), env, bp, gb).curvature.is_straight());
  // Center straight ahead, 90 degrees left and right.
  CHECK(baseline_step(Method::kS2C, Pose({-2, 0}, 0), env, bp, gb).curvature.is_straight());
  CHECK(baseline_step(Method::kS2C, Pose({0, -2}, M_PI), env, bp, gb).curvature.signed_radius() == -7.5);
  CHECK(baseline_step(Method::kS2C, Pose({0, -2}, 0), env, bp, gb).curvature.signed_radius() == 7.5);
  CHECK(baseline_step(Method::kS2C, Pose({0, 2}, 0), env, bp, gb).curvature.signed_radius() == -7.5);
}

TEST_CASE("S2O steering") {
  const PhysEnv env = rectangle_env(5, 5, 0.2);
  const BaselineParams bp;
  const GainBounds gb;
  const double orbit = 0.4 * 2.5;
  CHECK(baseline_step(Method::kS2O, Pose({orbit, 0}, 0.5 * M_PI), env, bp, gb).curvature.is_straight());
  CHECK(baseline_step(Method::kS2O, Pose({orbit, 0}, 1.5 * M_PI), env, bp, gb).curvature.is_straight());
  // Outside the orbit heading at the tangent point: straight.
  const double beta = std::acos(orbit / 2.0);
  const Point2 tangent{orbit * std::cos(beta), orbit * std::sin(beta)};
  const Point2 p{2.0, 0};
  CHECK(baseline_step(Method::kS2O, Pose(p, angle_of(tangent - p)), env, bp, gb)
            .curvature.is_straight());
  // Heading away from the room: turn.
  CHECK_FALSE(baseline_step(Method::kS2O, Pose(p, 0), env, bp, gb).curvature.is_straight());
}

TEST_CASE("ZigZag waypoints alternate") {
  const PhysEnv env = rectangle_env(2.5, 5, 0.2);
  const BaselineParams bp;
  const GainBounds gb;
  const auto [w0, w1] = zigzag_waypoints(env, bp);
  CHECK(w0.x == doctest::Approx(0.0));
  CHECK(w0.y == doctest::Approx(-1.0));
  CHECK(w1.y == doctest::Approx(1.0));
  BaselineDecision d = baseline_step(Method::kZigZag, Pose({0, -0.8}, 0), env, bp, gb, 0);
  CHECK(d.waypoint == 1);
  CHECK(d.curvature.signed_radius() == 7.5);
  d = baseline_step(Method::kZigZag, Pose({0, 0}, -0.5 * M_PI), env, bp, gb, 0);
  CHECK(d.waypoint == 0);
  CHECK(d.curvature.is_straight());
}

TEST_CASE("R2G headings") {
  const PhysEnv env = rectangle_env(5, 5, 0.2);
  // Closed form for a point on the horizontal midline: east and west walls
  // contribute along x only; north and south cancel.
  const double x = 2.0;
  const auto h = r2g_reset_heading({x, 0}, env);
  REQUIRE(h);
  CHECK(std::cos(*h) == doctest::Approx(-1.0));
  // Off the midline the oracle sum over the four walls sets the direction.
  const Point2 p{1.9, 0.7};
  double sx = 0, sy = 0;
  const oracle::World w = oracle::world_of(env);
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 a = w.boundary[i], b = w.boundary[(i + 1) % 4];
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double t = std::clamp(((p.x - a.x) * ex + (p.y - a.y) * ey) / (ex * ex + ey * ey), 0.0, 1.0);
    const double dx = p.x - (a.x + t * ex), dy = p.y - (a.y + t * ey);
    const double d = std::hypot(dx, dy);
    sx += dx / (d * d * d);
    sy += dy / (d * d * d);
  }
  const auto h2 = r2g_reset_heading(p, env);
  REQUIRE(h2);
  CHECK(*h2 == doctest::Approx(normalize_angle(std::atan2(sy, sx))).epsilon(1e-12));

  const auto corner = r2g_reset_heading({2.2, 2.2}, env);
  REQUIRE(corner);
  CHECK(*corner == doctest::Approx(1.25 * M_PI).epsilon(1e-9));
  CHECK_FALSE(r2g_reset_heading({0, 0}, env));
}
