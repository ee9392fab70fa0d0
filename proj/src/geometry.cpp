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

#include "dual_aeb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dual_aeb
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2)
{
  const auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
  const auto on_segment = [](Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
  };
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
         (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

}  // namespace

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v) { return std::hypot(v.x, v.y); }

double normalize_angle(double angle)
{
  double wrapped = angle - kTwoPi * std::floor((angle + std::numbers::pi) / kTwoPi);
  if (wrapped >= std::numbers::pi) {
    wrapped -= kTwoPi;
  }
  if (wrapped < -std::numbers::pi) {
    wrapped = -std::numbers::pi;
  }
  return wrapped;
}

Pose2D::Pose2D(double x_, double y_, double heading_) : x(x_), y(y_), heading(normalize_angle(heading_)) {}

OrientedBox::OrientedBox(Pose2D center, double half_length, double half_width)
: center_(center), half_length_(half_length), half_width_(half_width)
{
  if (!(half_length > 0.0) || !(half_width > 0.0)) {
    throw std::invalid_argument("OrientedBox: half extents must be positive");
  }
}

std::array<Vec2, 4> OrientedBox::corners() const
{
  const Vec2 c = center_.position();
  const Vec2 ax{std::cos(center_.heading), std::sin(center_.heading)};
  const Vec2 ay{-ax.y, ax.x};
  const Vec2 l = half_length_ * ax;
  const Vec2 w = half_width_ * ay;
  return {c + l - w, c + l + w, c - l + w, c - l - w};
}

double OrientedBox::bounding_radius() const { return std::hypot(half_length_, half_width_); }

Polygon::Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices))
{
  const std::size_t n = vertices_.size();
  if (n < 3) {
    throw std::invalid_argument("Polygon: at least 3 vertices required");
  }
  if (std::abs(signed_area()) <= 0.0) {
    throw std::invalid_argument("Polygon: degenerate (zero area)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        continue;
      }
      if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j], vertices_[(j + 1) % n])) {
        throw std::invalid_argument("Polygon: edges intersect (not simple)");
      }
    }
  }
  if (signed_area() < 0.0) {
    std::reverse(vertices_.begin(), vertices_.end());
  }
}

Polygon Polygon::rectangle(double x_min, double y_min, double x_max, double y_max)
{
  return Polygon({{x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}});
}

double Polygon::signed_area() const
{
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    twice += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
  }
  return 0.5 * twice;
}

bool obb_intersects(const OrientedBox & a, const OrientedBox & b)
{
  const Vec2 a_x{std::cos(a.center().heading), std::sin(a.center().heading)};
  const Vec2 a_y{-a_x.y, a_x.x};
  const Vec2 b_x{std::cos(b.center().heading), std::sin(b.center().heading)};
  const Vec2 b_y{-b_x.y, b_x.x};
  const Vec2 offset = b.center().position() - a.center().position();

  for (const Vec2 axis : {a_x, a_y, b_x, b_y}) {
    const double ra = a.half_length() * std::abs(dot(a_x, axis)) + a.half_width() * std::abs(dot(a_y, axis));
    const double rb = b.half_length() * std::abs(dot(b_x, axis)) + b.half_width() * std::abs(dot(b_y, axis));
    if (std::abs(dot(offset, axis)) - ra - rb > kSeparationEpsilon) {
      return false;
    }
  }
  return true;
}

bool polygon_contains(const Polygon & poly, Vec2 p)
{
  const auto verts = poly.vertices();
  const std::size_t n = verts.size();

  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = verts[i];
    const Vec2 b = verts[(i + 1) % n];
    const Vec2 edge = b - a;
    const double len = norm(edge);
    if (std::abs(cross(edge, p - a)) <= 1e-12 * std::max(1.0, len)) {
      const double along = dot(p - a, edge);
      if (along >= -1e-12 && along <= dot(edge, edge) + 1e-12) {
        return true;
      }
    }
  }

  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 vi = verts[i];
    const Vec2 vj = verts[j];
    if ((vi.y > p.y) != (vj.y > p.y)) {
      const double x_cross = vj.x + (p.y - vj.y) * (vi.x - vj.x) / (vi.y - vj.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

bool box_within_area(const OrientedBox & box, const Polygon & area)
{
  return polygon_contains(area, box.center().position());
}

}  // namespace dual_aeb
