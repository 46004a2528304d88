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

#include "mrdw/reach.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

namespace mrdw {

namespace {

constexpr double kRadiusCeiling = 1e8;

double chord(double radius, double arc_length) {
  return 2.0 * radius * std::sin(arc_length / (2.0 * radius));
}

}  // namespace

ReachAnnulus annulus(double T, double v, const GainBounds& bounds) {
  if (T < 0.0) throw std::invalid_argument("time budget must be >= 0");
  if (!(v > 0.0)) throw std::invalid_argument("walking speed must be > 0");
  ReachAnnulus a;
  a.s_near = v * T / bounds.g_t_max;
  a.s_max = v * T / bounds.g_t_min;
  a.s_min = chord(arc_radius_floor(a.s_near, bounds), a.s_near);
  return a;
}

double arc_radius_floor(double s_near, const GainBounds& bounds) {
  return std::max(bounds.radius_min, s_near / std::numbers::pi);
}

double solve_radius(double s, double T, double v, const GainBounds& bounds) {
  const double s_near = annulus(T, v, bounds).s_near;
  const double lo_radius = arc_radius_floor(s_near, bounds);
  const double s_lo = chord(lo_radius, s_near);
  if (!(s >= s_lo - 1e-12 && s < s_near)) {
    throw OutOfDomain(fmt::format(
        "displacement {} outside the arc branch [{}, {})", s, s_lo, s_near));
  }
  if (s <= s_lo) return lo_radius;

  double lo = lo_radius;
  double hi = kRadiusCeiling;
  if (chord(hi, s_near) <= s) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chord(mid, s_near) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(chord(lo, s_near) - s) <= std::abs(chord(hi, s_near) - s)
             ? lo
             : hi;
}

double solve_radius_discrete(double s, double T, double v,
                             const GainBounds& bounds, int k) {
  const double s_near = annulus(T, v, bounds).s_near;
  const double floor_radius = arc_radius_floor(s_near, bounds);
  // Scanning radii are increasing in i and so are their chords.
  std::vector<double> radii;
  for (const double a : candidate_alphas(k)) {
    const double r = std::abs(a) * bounds.radius_min;
    if (r >= floor_radius && (radii.empty() || r > radii.back())) {
      radii.push_back(r);
    }
  }
  if (radii.empty()) radii.push_back(floor_radius);
  const auto it = std::lower_bound(
      radii.begin(), radii.end(), s,
      [&](double r, double target) { return chord(r, s_near) < target; });
  if (it == radii.begin()) return radii.front();
  if (it == radii.end()) return radii.back();
  const double above = *it;
  const double below = *(it - 1);
  return std::abs(chord(below, s_near) - s) <= std::abs(chord(above, s_near) - s)
             ? below
             : above;
}

std::optional<ReachPlan> plan_to(Point2 p, Point2 q, double T, double v,
                                 const PhysEnv& env, const GainBounds& bounds,
                                 const ReachOptions& options) {
  if (!(T > 0.0) || !env.in_free_space(p)) return std::nullopt;
  const ReachAnnulus a = annulus(T, v, bounds);
  const double s = distance(p, q);

  if (s >= a.s_near && s <= a.s_max) {
    if (segment_blocked(p, q, env)) return std::nullopt;
    ReachPlan plan;
    plan.target = q;
    plan.command.reset_heading = normalize_angle(angle_of(q - p));
    plan.command.curvature = Curvature::straight();
    plan.command.g_t = std::clamp(v * T / s, bounds.g_t_min, bounds.g_t_max);
    plan.arrival_time = T;
    plan.path_length = s;
    return plan;
  }

  const double floor_radius = arc_radius_floor(a.s_near, bounds);
  if (s < chord(floor_radius, a.s_near) - 1e-12 || s >= a.s_near) {
    return std::nullopt;
  }
  const double radius =
      options.discrete_radius
          ? solve_radius_discrete(s, T, v, bounds, options.k)
          : solve_radius(s, T, v, bounds);

  for (const Chirality side : {Chirality::kLeft, Chirality::kRight}) {
    Point2 landing = q;
    double heading = 0.0;
    if (options.discrete_radius) {
      // Aim the fixed-radius arc so that its end lies on the ray p->q.
      const double c = chord(radius, a.s_near);
      landing = p + (q - p) * (c / s);
    }
    if (arc_blocked(p, landing, radius, side, env)) continue;
    heading = minor_arc_start_heading(p, landing, radius, side);
    ReachPlan plan;
    plan.target = landing;
    plan.command.reset_heading = heading;
    plan.command.curvature =
        Curvature::radius(side == Chirality::kLeft ? radius : -radius);
    plan.command.g_t = bounds.g_t_max;
    plan.arrival_time = T;
    plan.path_length = a.s_near;
    return plan;
  }
  return std::nullopt;
}

std::vector<ReachableSkeletonPosition> reachable_skeleton_positions(
    Point2 p, double T, double v, const PhysEnv& env, const SkeletonGrid& grid,
    const ReachOptions& options) {
  std::vector<ReachableSkeletonPosition> out;
  if (!(T > 0.0)) return out;
  const ReachAnnulus a = annulus(T, v, grid.params().bounds);
  const double lo = chord(arc_radius_floor(a.s_near, grid.params().bounds), a.s_near);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = distance(p, grid.positions()[i]);
    if (s < lo - 1e-12 || s > a.s_max) continue;
    if (auto plan = plan_to(p, grid.positions()[i], T, v, env,
                            grid.params().bounds, options)) {
      out.push_back({i, std::move(*plan)});
    }
  }
  return out;
}

}  // namespace mrdw
