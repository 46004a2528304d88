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

#include "mrdw/geom.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>
#include <optional>

namespace mrdw {

double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_pi(double a) {
  double r = normalize_angle(a);
  return r > std::numbers::pi ? r - kTwoPi : r;
}

double signed_area(const Polygon& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * twice;
}

Point2 closest_point_on_segment(Point2 p, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double len2 = dot(e, e);
  if (len2 == 0.0) return s.a;
  const double t = std::clamp(dot(p - s.a, e) / len2, 0.0, 1.0);
  return s.a + e * t;
}

double point_segment_distance(Point2 p, const Segment& s) {
  return distance(p, closest_point_on_segment(p, s));
}

bool point_in_polygon(Point2 p, const Polygon& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i];
    const Point2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

PoseOutsideFreeSpace::PoseOutsideFreeSpace(Point2 p)
    : GeometryError(fmt::format("position ({:.6f}, {:.6f}) is outside the "
                                "eroded free space",
                                p.x, p.y)) {}

ChordTooLong::ChordTooLong(double chord, double radius)
    : GeometryError(fmt::format("chord {:.9f} m exceeds the diameter of a "
                                "{:.9f} m arc",
                                chord, radius)) {}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool segments_cross_properly(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

void validate_polygon(const Polygon& poly, const std::string& what) {
  if (poly.size() < 3) {
    throw GeometryError(what + " needs at least 3 vertices");
  }
  for (const Point2& v : poly) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw GeometryError(what + " has a non-finite coordinate");
    }
  }
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(poly[i], poly[(i + 1) % n]) < 1e-12) {
      throw GeometryError(fmt::format("{} has a repeated vertex at index {}",
                                      what, (i + 1) % n));
    }
  }
  if (std::abs(signed_area(poly)) < 1e-12) {
    throw GeometryError(what + " has zero area");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j],
                             poly[(j + 1) % n])) {
        throw GeometryError(fmt::format(
            "{} is self-intersecting (edges {} and {})", what, i, j));
      }
    }
  }
}

Point2 polygon_centroid(const Polygon& poly) {
  double a2 = 0.0;
  Vec2 acc{};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % poly.size()];
    const double c = cross(p, q);
    a2 += c;
    acc = acc + (p + q) * c;
  }
  return acc / (3.0 * a2);
}

}  // namespace

PhysEnv::PhysEnv(Polygon boundary, std::vector<Polygon> obstacles,
                 double clearance)
    : boundary_(std::move(boundary)),
      obstacles_(std::move(obstacles)),
      clearance_(clearance) {
  if (!std::isfinite(clearance_) || clearance_ < 0.0) {
    throw GeometryError("clearance must be a finite non-negative length");
  }
  validate_polygon(boundary_, "boundary");
  if (signed_area(boundary_) < 0.0) {
    std::reverse(boundary_.begin(), boundary_.end());
  }
  for (std::size_t k = 0; k < obstacles_.size(); ++k) {
    Polygon& obs = obstacles_[k];
    const std::string name = fmt::format("obstacle {}", k);
    validate_polygon(obs, name);
    if (signed_area(obs) > 0.0) std::reverse(obs.begin(), obs.end());
    for (const Point2& v : obs) {
      const bool on_edge = [&] {
        for (std::size_t i = 0; i < boundary_.size(); ++i) {
          const Segment s{boundary_[i], boundary_[(i + 1) % boundary_.size()]};
          if (point_segment_distance(v, s) < 1e-12) return true;
        }
        return false;
      }();
      if (!on_edge && !point_in_polygon(v, boundary_)) {
        throw GeometryError(name + " is not inside the boundary");
      }
    }
    for (std::size_t i = 0; i < obs.size(); ++i) {
      for (std::size_t j = 0; j < boundary_.size(); ++j) {
        if (segments_cross_properly(obs[i], obs[(i + 1) % obs.size()],
                                    boundary_[j],
                                    boundary_[(j + 1) % boundary_.size()])) {
          throw GeometryError(name + " crosses the boundary");
        }
      }
    }
  }

  auto add_walls = [this](const Polygon& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      walls_.push_back({poly[i], poly[(i + 1) % poly.size()]});
    }
  };
  add_walls(boundary_);
  for (const Polygon& obs : obstacles_) add_walls(obs);

  bounds_ = {boundary_.front(), boundary_.front()};
  for (const Point2& v : boundary_) {
    bounds_.min = {std::min(bounds_.min.x, v.x), std::min(bounds_.min.y, v.y)};
    bounds_.max = {std::max(bounds_.max.x, v.x), std::max(bounds_.max.y, v.y)};
  }
  centroid_ = polygon_centroid(boundary_);
}

PhysEnv PhysEnv::with_clearance(double clearance) const {
  return PhysEnv(boundary_, obstacles_, clearance);
}

double PhysEnv::wall_distance(Point2 p) const {
  double best = kInf;
  for (const Segment& w : walls_) {
    best = std::min(best, point_segment_distance(p, w));
  }
  return best;
}

bool PhysEnv::in_free_space(Point2 p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  const double d = wall_distance(p);
  if (d < clearance_ - kGeomEps) return false;
  // Only reachable with (near) zero clearance: the point lies on a wall.
  if (d <= kGeomEps) return true;
  if (!point_in_polygon(p, boundary_)) return false;
  return std::none_of(obstacles_.begin(), obstacles_.end(),
                      [&](const Polygon& o) { return point_in_polygon(p, o); });
}

Point2 ArcPath::center() const {
  return start_.position() + perp(start_.direction()) * radius_;
}

Point2 ArcPath::point_at(double s) const {
  if (straight_) return start_.position() + start_.direction() * s;
  const double h = start_.heading() + s / radius_;
  return center() + Vec2{std::sin(h), -std::cos(h)} * radius_;
}

double ArcPath::heading_at(double s) const {
  if (straight_) return start_.heading();
  return normalize_angle(start_.heading() + s / radius_);
}

namespace {

// A piece of the boundary of one wall's forbidden capsule: either a line
// segment (with the unit normal pointing into the capsule) or a circle.
struct LinePiece {
  Point2 a;
  Point2 b;
  Vec2 inward;
};
struct CirclePiece {
  Point2 center;
  double radius;
};

// Near-tangent crossings are ill-conditioned (error ~ sqrt(eps)); an entering
// crossing this close behind the start means the path leaves right away.
constexpr double kBehindTolerance = 1e-6;

// Accumulates the smallest parameter at which the path enters a capsule.
class HitCollector {
 public:
  explicit HitCollector(double period) : period_(period) {}

  void offer(double s, bool entering) {
    if (!entering) return;
    if (period_ > 0.0 && s > period_ - kBehindTolerance) s -= period_;
    if (s < -kBehindTolerance) return;
    best_ = std::min(best_, std::max(s, 0.0));
  }
  double best() const { return best_; }

 private:
  double period_;
  double best_ = kInf;
};

template <typename Fn>
void for_each_piece(const PhysEnv& env, Fn&& fn) {
  const double c = env.clearance();
  for (const Segment& w : env.walls()) {
    const Vec2 e = w.b - w.a;
    const Vec2 n = perp(e) / norm(e);  // free side
    if (c <= kGeomEps) {
      fn(LinePiece{w.a, w.b, -n});
      continue;
    }
    fn(LinePiece{w.a + n * c, w.b + n * c, -n});
    fn(LinePiece{w.a - n * c, w.b - n * c, n});
    fn(CirclePiece{w.a, c});
    fn(CirclePiece{w.b, c});
  }
}

// Roots of a t^2 + 2 b t + c = 0, numerically stable.
int solve_quadratic(double a, double b, double c, std::array<double, 2>& out) {
  const double disc = b * b - a * c;
  if (disc < 0.0 || a == 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double q = -(b + std::copysign(sq, b));
  if (q == 0.0) {
    out[0] = 0.0;
    return 1;
  }
  out[0] = q / a;
  out[1] = c / q;
  if (out[0] > out[1]) std::swap(out[0], out[1]);
  return 2;
}

double first_hit_straight_impl(Point2 o, Vec2 d, const PhysEnv& env) {
  HitCollector hits(0.0);
  auto visit = [&](const auto& piece) {
    using T = std::decay_t<decltype(piece)>;
    if constexpr (std::is_same_v<T, LinePiece>) {
      const Vec2 e = piece.b - piece.a;
      const double denom = cross(d, e);
      if (std::abs(denom) <= 1e-15 * norm(e)) return;
      const double s = cross(piece.a - o, e) / denom;
      const double t = cross(piece.a - o, d) / denom;
      if (t < -1e-12 || t > 1.0 + 1e-12) return;
      hits.offer(s, dot(d, piece.inward) > 1e-12);
    } else {
      const Vec2 w = o - piece.center;
      std::array<double, 2> roots{};
      const int n =
          solve_quadratic(1.0, dot(d, w), dot(w, w) - piece.radius * piece.radius,
                          roots);
      for (int i = 0; i < n; ++i) {
        const Point2 q = o + d * roots[i];
        hits.offer(roots[i], dot(d, piece.center - q) > 1e-12);
      }
    }
  };
  for_each_piece(env, [&](const auto& p) { visit(p); });
  return hits.best();
}

double first_hit_arc_impl(const ArcPath& path, const PhysEnv& env) {
  // Everything is expressed relative to the start point so that very large
  // radii do not cancel catastrophically against the far-away center.
  const double r = path.signed_radius();
  const double rho = std::abs(r);
  const double sigma = r > 0.0 ? 1.0 : -1.0;
  const Point2 p = path.start().position();
  const Vec2 dir = path.start().direction();
  const Vec2 left = perp(dir);
  const Vec2 to_center = left * r;  // oc - p
  const double period = kTwoPi * rho;
  HitCollector hits(period);

  // |x - oc|^2 - rho^2 for a point given as x - p.
  auto power = [&](Vec2 rel) { return dot(rel, rel) - 2.0 * r * dot(rel, left); };
  auto param_of = [&](Vec2 rel) {
    const double x = dot(rel, dir);
    const double y = sigma * dot(rel, left);
    return rho * normalize_angle(std::atan2(x, rho - y));
  };
  auto tangent_at = [&](Vec2 rel) { return perp(rel - to_center) * (sigma / rho); };

  auto visit = [&](const auto& piece) {
    using T = std::decay_t<decltype(piece)>;
    if constexpr (std::is_same_v<T, LinePiece>) {
      const Vec2 e = piece.b - piece.a;
      const Vec2 ap = piece.a - p;
      std::array<double, 2> roots{};
      const int n = solve_quadratic(dot(e, e), dot(e, ap - to_center), power(ap), roots);
      for (int i = 0; i < n; ++i) {
        const double t = roots[i];
        if (t < -1e-12 || t > 1.0 + 1e-12) continue;
        const Vec2 rel = ap + e * t;
        hits.offer(param_of(rel), dot(tangent_at(rel), piece.inward) > 1e-12);
      }
    } else {
      const Vec2 cp = piece.center - p;
      const Vec2 u = cp - to_center;
      const double dist = norm(u);
      if (dist == 0.0) return;
      const double c = piece.radius;
      if (dist > rho + c || dist < std::abs(rho - c)) return;
      const double big_d = power(cp);  // dist^2 - rho^2
      const double a = dist - (big_d + c * c) / (2.0 * dist);
      const double rho_minus_a = -big_d / (rho + dist) + (big_d + c * c) / (2.0 * dist);
      const double h = std::sqrt(std::max(0.0, rho_minus_a * (rho + a)));
      const Vec2 un = u / dist;
      for (const double sgn : {-1.0, 1.0}) {
        const Vec2 rel = to_center + un * a + perp(un) * (h * sgn);
        hits.offer(param_of(rel), dot(tangent_at(rel), cp - rel) > 1e-12);
      }
    }
  };
  for_each_piece(env, [&](const auto& piece) { visit(piece); });
  return hits.best();
}

// A path starting in contact with the eroded boundary can leave it at once
// without a transversal crossing: heading along the wall while bending into
// it. The intersection root is then a double root and is easy to miss, so
// the start is classified directly from first and second derivatives of the
// distance to each touching wall.
bool leaves_immediately(const ArcPath& path, const PhysEnv& env) {
  const Point2 p = path.start().position();
  const Vec2 t = path.start().direction();
  const double r = path.is_straight() ? 0.0 : path.signed_radius();
  const Vec2 acc = r == 0.0 ? Vec2{} : perp(t) / r;
  const double c = env.clearance();
  for (const Segment& w : env.walls()) {
    const Point2 cp = closest_point_on_segment(p, w);
    const double d = distance(p, cp);
    if (std::abs(d - c) > kGeomEps) continue;
    Vec2 toward;
    if (d > kGeomEps) {
      toward = (cp - p) / d;
    } else {
      const Vec2 e = w.b - w.a;
      toward = -perp(e) / norm(e);
    }
    const double approach = dot(t, toward);
    if (approach > kGeomEps) return true;
    if (approach < -kGeomEps) continue;
    const bool at_end = distance(cp, w.a) <= kGeomEps || distance(cp, w.b) <= kGeomEps;
    const double bend_limit = at_end && d > kGeomEps ? 1.0 / d : 0.0;
    if (dot(acc, toward) > bend_limit + 1e-12) return true;
  }
  return false;
}

}  // namespace

double first_hit(const ArcPath& path, const PhysEnv& env) {
  if (!env.in_free_space(path.start().position())) {
    throw PoseOutsideFreeSpace(path.start().position());
  }
  if (env.wall_distance(path.start().position()) <= env.clearance() + kGeomEps &&
      leaves_immediately(path, env)) {
    return 0.0;
  }
  if (path.is_straight()) {
    return first_hit_straight_impl(path.start().position(),
                                   path.start().direction(), env);
  }
  return first_hit_arc_impl(path, env);
}

double first_hit_straight(const Pose& pose, const PhysEnv& env) {
  return first_hit(ArcPath::straight(pose), env);
}

double first_hit_arc(const Pose& pose, double signed_radius,
                     const PhysEnv& env) {
  if (signed_radius == 0.0 || !std::isfinite(signed_radius)) {
    throw GeometryError("arc radius must be finite and non-zero");
  }
  return first_hit(ArcPath::curved(pose, signed_radius), env);
}

bool segment_blocked(Point2 p, Point2 q, const PhysEnv& env) {
  if (!env.in_free_space(p)) return true;
  const double len = distance(p, q);
  if (len == 0.0) return false;
  const double hit = first_hit_straight(Pose(p, angle_of(q - p)), env);
  return hit < len - kGeomEps;
}

double minor_arc_length(double chord, double radius) {
  return 2.0 * radius * std::asin(std::min(1.0, chord / (2.0 * radius)));
}

double minor_arc_start_heading(Point2 p, Point2 q, double radius,
                               Chirality chirality) {
  const double chord = distance(p, q);
  if (chord > 2.0 * radius + 1e-9) throw ChordTooLong(chord, radius);
  if (chord == 0.0) return 0.0;
  const double half = std::asin(std::min(1.0, chord / (2.0 * radius)));
  const double dir = angle_of(q - p);
  return normalize_angle(chirality == Chirality::kLeft ? dir - half
                                                       : dir + half);
}

bool arc_blocked(Point2 p, Point2 q, double radius, Chirality chirality,
                 const PhysEnv& env) {
  const double heading = minor_arc_start_heading(p, q, radius, chirality);
  if (!env.in_free_space(p)) return true;
  const double len = minor_arc_length(distance(p, q), radius);
  if (len == 0.0) return false;
  const double r = chirality == Chirality::kLeft ? radius : -radius;
  const double hit = first_hit_arc(Pose(p, heading), r, env);
  return hit < len - kGeomEps;
}

}  // namespace mrdw
