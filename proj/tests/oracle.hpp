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

// Test-only reference computations. Nothing here calls into the analytic
// intersection code; free-space membership is re-derived from first
// principles so the oracles stay independent of the implementation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mrdw/geom.hpp"
#include "mrdw/rng.hpp"

namespace oracle {

using mrdw::Point2;
using mrdw::Polygon;

struct World {
  Polygon boundary;
  std::vector<Polygon> obstacles;
  double clearance = 0.0;
};

inline World world_of(const mrdw::PhysEnv& env) {
  return {env.boundary(), env.obstacles(), env.clearance()};
}

inline double seg_dist(Point2 p, Point2 a, Point2 b) {
  const double ex = b.x - a.x, ey = b.y - a.y;
  const double len2 = ex * ex + ey * ey;
  double t = ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * ex), p.y - (a.y + t * ey));
}

inline bool inside(Point2 p, const Polygon& poly) {
  int winding = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i], b = poly[(i + 1) % n];
    const double c = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    if (a.y <= p.y) {
      if (b.y > p.y && c > 0) ++winding;
    } else if (b.y <= p.y && c < 0) {
      --winding;
    }
  }
  return winding != 0;
}

inline double wall_dist(Point2 p, const World& w) {
  double d = std::numeric_limits<double>::infinity();
  auto scan = [&](const Polygon& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      d = std::min(d, seg_dist(p, poly[i], poly[(i + 1) % poly.size()]));
    }
  };
  scan(w.boundary);
  for (const auto& o : w.obstacles) scan(o);
  return d;
}

/// Signed margin: positive inside the eroded free space.
inline double margin(Point2 p, const World& w) {
  const double d = wall_dist(p, w);
  bool free = inside(p, w.boundary);
  for (const auto& o : w.obstacles) free = free && !inside(p, o);
  return free ? d - w.clearance : -d - w.clearance;
}

/// Point at arc length s on the circle tangent to (p, heading) with signed
/// radius r (r == 0 means straight), by direct trigonometry.
inline Point2 march_point(Point2 p, double heading, double r, double s) {
  if (r == 0.0) return {p.x + s * std::cos(heading), p.y + s * std::sin(heading)};
  const double cx = p.x - r * std::sin(heading);
  const double cy = p.y + r * std::cos(heading);
  const double h = heading + s / r;
  return {cx + r * std::sin(h), cy - r * std::cos(h)};
}

/// First arc length at which the path leaves free space, by marching with
/// the given resolution. Steps larger than `step` are only taken when the
/// clearance margin guarantees no crossing within them. Returns infinity if
/// no crossing is found within `max_length`.
inline double march_first_hit(const World& w, Point2 p, double heading, double r,
                              double step = 1e-4, double max_length = -1.0) {
  if (max_length < 0.0) {
    max_length = r == 0.0 ? 1e4 : 2.0 * M_PI * std::abs(r);
  }
  double s = 0.0;
  // Tolerate a start sitting exactly on the clearance boundary.
  const double tol = 1e-9;
  while (s < max_length) {
    const double m = margin(march_point(p, heading, r, s), w);
    if (m < -tol && s > 0.0) {
      // Bracket [s - last, s]; refine by bisection.
      double lo = std::max(0.0, s - step), hi = s;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (margin(march_point(p, heading, r, mid), w) < -tol) hi = mid; else lo = mid;
      }
      return hi;
    }
    if (m < -tol) return 0.0;
    s += std::max(step, 0.9 * m);
  }
  return std::numeric_limits<double>::infinity();
}

/// Random rectangular room with up to three rectangular obstacles.
inline mrdw::PhysEnv random_env(mrdw::Rng& rng, double clearance_max = 0.3) {
  const double w = rng.uniform(3.0, 10.0), h = rng.uniform(3.0, 10.0);
  const int n_obs = static_cast<int>(rng.uniform(0.0, 4.0));
  std::vector<Polygon> obs;
  for (int i = 0; i < n_obs; ++i) {
    const double ow = rng.uniform(0.2, w / 4), oh = rng.uniform(0.2, h / 4);
    const double cx = rng.uniform(-w / 2 + ow, w / 2 - ow);
    const double cy = rng.uniform(-h / 2 + oh, h / 2 - oh);
    Polygon o{{cx - ow / 2, cy - oh / 2}, {cx + ow / 2, cy - oh / 2},
              {cx + ow / 2, cy + oh / 2}, {cx - ow / 2, cy + oh / 2}};
    bool overlaps = false;
    for (const auto& other : obs) {
      for (const auto& v : o) overlaps = overlaps || inside(v, other);
      for (const auto& v : other) overlaps = overlaps || inside(v, o);
    }
    if (!overlaps) obs.push_back(o);
  }
  const double c = rng.uniform(0.0, clearance_max);
  return mrdw::PhysEnv({{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}},
                       obs, c);
}

/// Random strictly free position (margin >= 1e-3).
inline Point2 random_free_point(mrdw::Rng& rng, const mrdw::PhysEnv& env) {
  const World w = world_of(env);
  for (;;) {
    const Point2 p{rng.uniform(env.bounds().min.x, env.bounds().max.x),
                   rng.uniform(env.bounds().min.y, env.bounds().max.y)};
    if (margin(p, w) > 1e-3) return p;
  }
}

}  // namespace oracle
