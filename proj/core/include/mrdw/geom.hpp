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

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrdw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr bool operator==(const Vec2&) const = default;
};
using Point2 = Vec2;

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }
inline double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }
// Counter-clockwise perpendicular.
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// Wraps an angle into [0, 2*pi).
double normalize_angle(double a);
/// Wraps an angle into (-pi, pi].
double wrap_pi(double a);

/// Physical pose: position plus heading, heading kept in [0, 2*pi).
class Pose {
 public:
  Pose() = default;
  Pose(Point2 position, double heading)
      : position_(position), heading_(normalize_angle(heading)) {}

  Point2 position() const { return position_; }
  double heading() const { return heading_; }
  Vec2 direction() const { return unit_from_angle(heading_); }

  bool operator==(const Pose&) const = default;

 private:
  Point2 position_{};
  double heading_ = 0.0;
};

using Polygon = std::vector<Point2>;

struct Segment {
  Point2 a;
  Point2 b;
};

double signed_area(const Polygon& poly);
double point_segment_distance(Point2 p, const Segment& s);
Point2 closest_point_on_segment(Point2 p, const Segment& s);
/// Strict containment by crossing number; points on an edge are unspecified.
bool point_in_polygon(Point2 p, const Polygon& poly);

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoseOutsideFreeSpace : public GeometryError {
 public:
  explicit PoseOutsideFreeSpace(Point2 p);
};

class ChordTooLong : public GeometryError {
 public:
  ChordTooLong(double chord, double radius);
};

/// Axis-aligned bounding box.
struct Box {
  Point2 min;
  Point2 max;
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  Point2 center() const { return (min + max) * 0.5; }
};

/// A physical room: boundary polygon, obstacle polygons, and a clearance by
/// which every wall is inflated. All planning and collision queries run
/// against the clearance-eroded free space.
class PhysEnv {
 public:
  static constexpr double kDefaultClearance = 0.2;

  /// Throws GeometryError on degenerate, self-intersecting, or misplaced
  /// polygons. Boundary is reoriented CCW, obstacles CW.
  PhysEnv(Polygon boundary, std::vector<Polygon> obstacles,
          double clearance = kDefaultClearance);

  const Polygon& boundary() const { return boundary_; }
  const std::vector<Polygon>& obstacles() const { return obstacles_; }
  double clearance() const { return clearance_; }
  /// Every wall edge, boundary first. Free space lies to the left of each.
  const std::vector<Segment>& walls() const { return walls_; }
  const Box& bounds() const { return bounds_; }
  /// Area centroid of the boundary polygon.
  Point2 centroid() const { return centroid_; }

  /// Distance from p to the nearest wall or obstacle edge.
  double wall_distance(Point2 p) const;
  /// Closed eroded free space: inside, and at least `clearance` from walls.
  bool in_free_space(Point2 p) const;

  PhysEnv with_clearance(double clearance) const;

 private:
  Polygon boundary_;
  std::vector<Polygon> obstacles_;
  double clearance_;
  std::vector<Segment> walls_;
  Box bounds_;
  Point2 centroid_;
};

/// Tolerance used for free-space membership and for treating a hit at the
/// starting point as "already touching".
inline constexpr double kGeomEps = 1e-9;

/// Constant-curvature path. A signed radius > 0 turns left (center on the
/// left of the heading); straight paths carry no radius.
class ArcPath {
 public:
  static ArcPath straight(Pose start) { return ArcPath(start, 0.0, true); }
  static ArcPath curved(Pose start, double signed_radius) {
    return ArcPath(start, signed_radius, false);
  }

  const Pose& start() const { return start_; }
  bool is_straight() const { return straight_; }
  double signed_radius() const { return radius_; }
  Point2 center() const;

  Point2 point_at(double s) const;
  double heading_at(double s) const;
  Pose pose_at(double s) const { return {point_at(s), heading_at(s)}; }

 private:
  ArcPath(Pose start, double r, bool straight)
      : start_(start), radius_(r), straight_(straight) {}
  Pose start_;
  double radius_;
  bool straight_;
};

/// Arc length travelled along `path` before it first leaves the eroded free
/// space, or infinity if it never does (for a curved path: within one full
/// revolution). Throws PoseOutsideFreeSpace if the start is not free.
double first_hit(const ArcPath& path, const PhysEnv& env);

double first_hit_straight(const Pose& pose, const PhysEnv& env);
double first_hit_arc(const Pose& pose, double signed_radius,
                     const PhysEnv& env);

/// True iff the segment p->q leaves the eroded free space.
bool segment_blocked(Point2 p, Point2 q, const PhysEnv& env);

enum class Chirality { kLeft, kRight };

/// Heading at p of the minor arc of given radius and chirality through p and
/// q. Throws ChordTooLong if |q - p| > 2 * radius.
double minor_arc_start_heading(Point2 p, Point2 q, double radius,
                               Chirality chirality);
/// Length of the minor arc of the given radius subtending chord |q - p|.
double minor_arc_length(double chord, double radius);

/// True iff the minor arc from p to q of the given radius and chirality
/// leaves the eroded free space.
bool arc_blocked(Point2 p, Point2 q, double radius, Chirality chirality,
                 const PhysEnv& env);

}  // namespace mrdw
