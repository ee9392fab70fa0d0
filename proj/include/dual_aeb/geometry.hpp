// Copyright 2026 The Dual-AEB Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUAL_AEB__GEOMETRY_HPP_
#define DUAL_AEB__GEOMETRY_HPP_

#include <array>
#include <span>
#include <vector>

namespace dual_aeb
{

/// Separating-axis tolerance in meters. Gaps at or below it count as contact.
inline constexpr double kSeparationEpsilon = 1e-9;

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 v);

/// Wraps an angle into [-pi, pi).
double normalize_angle(double angle);

struct Pose2D
{
  double x{0.0};
  double y{0.0};
  double heading{0.0};  // radians, kept in [-pi, pi)

  Pose2D() = default;
  Pose2D(double x_, double y_, double heading_);

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose2D &, const Pose2D &) = default;
};

/// Rotated rectangle. half_length runs along the heading, half_width across it.
class OrientedBox
{
public:
  OrientedBox(Pose2D center, double half_length, double half_width);

  static OrientedBox from_dimensions(Pose2D center, double length, double width)
  {
    return OrientedBox(center, 0.5 * length, 0.5 * width);
  }

  const Pose2D & center() const { return center_; }
  double half_length() const { return half_length_; }
  double half_width() const { return half_width_; }

  /// Corners in counter-clockwise order, starting at front-right.
  std::array<Vec2, 4> corners() const;

  /// Radius of the circumscribed circle.
  double bounding_radius() const;

  OrientedBox with_center(Pose2D center) const { return OrientedBox(center, half_length_, half_width_); }

  friend bool operator==(const OrientedBox &, const OrientedBox &) = default;

private:
  Pose2D center_;
  double half_length_;
  double half_width_;
};

/// Simple polygon, stored counter-clockwise.
class Polygon
{
public:
  /// Accepts either winding and stores CCW. Throws std::invalid_argument when
  /// fewer than 3 vertices are given, the area is degenerate, or edges cross.
  explicit Polygon(std::vector<Vec2> vertices);

  static Polygon rectangle(double x_min, double y_min, double x_max, double y_max);

  std::span<const Vec2> vertices() const { return vertices_; }
  double signed_area() const;

private:
  std::vector<Vec2> vertices_;
};

/// Closed-rectangle overlap via the separating-axis test. Touching counts.
bool obb_intersects(const OrientedBox & a, const OrientedBox & b);

/// Even-odd containment with boundary points counted as inside.
bool polygon_contains(const Polygon & poly, Vec2 p);

/// A box is within the area when its center is.
bool box_within_area(const OrientedBox & box, const Polygon & area);

}  // namespace dual_aeb

#endif  // DUAL_AEB__GEOMETRY_HPP_
