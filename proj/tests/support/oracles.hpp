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

#ifndef DUAL_AEB__TESTS__ORACLES_HPP_
#define DUAL_AEB__TESTS__ORACLES_HPP_

// Reference computations that share no code with the library beyond plain
// data types. Slow on purpose; clarity over speed.

#include "dual_aeb/kinematics.hpp"
#include "dual_aeb/rule_aeb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace oracle
{

struct P
{
  double x;
  double y;
};

using Quad = std::array<P, 4>;

/// Corners from centre, heading and half extents via an explicit rotation matrix.
inline Quad corners(double cx, double cy, double heading, double hl, double hw)
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const std::array<std::pair<double, double>, 4> local = {{{hl, -hw}, {hl, hw}, {-hl, hw}, {-hl, -hw}}};
  Quad q{};
  for (std::size_t i = 0; i < 4; ++i) {
    q[i] = {cx + c * local[i].first - s * local[i].second, cy + s * local[i].first + c * local[i].second};
  }
  return q;
}

inline Quad corners(const dual_aeb::OrientedBox & b)
{
  return corners(b.center().x, b.center().y, b.center().heading, b.half_length(), b.half_width());
}

/// Interval of x where the horizontal line at y crosses the convex quad.
inline std::optional<std::pair<double, double>> row_span(const Quad & q, double y)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < 4; ++i) {
    const P a = q[i];
    const P b = q[(i + 1) % 4];
    if ((y < std::min(a.y, b.y)) || (y > std::max(a.y, b.y))) {
      continue;
    }
    if (a.y == b.y) {
      lo = std::min({lo, a.x, b.x});
      hi = std::max({hi, a.x, b.x});
      continue;
    }
    const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (lo > hi) {
    return std::nullopt;
  }
  return std::make_pair(lo, hi);
}

/// Scanline rasterisation on a square grid of side `res`: two quads overlap
/// when some row has cells covered by both.
inline bool raster_overlap(const Quad & a, const Quad & b, double res)
{
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -y0;
  for (const auto & q : {a, b}) {
    for (const P p : q) {
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  const auto first = static_cast<long>(std::floor(y0 / res));
  const auto last = static_cast<long>(std::ceil(y1 / res));
  for (long row = first; row <= last; ++row) {
    const double y = (static_cast<double>(row) + 0.5) * res;
    const auto sa = row_span(a, y);
    const auto sb = row_span(b, y);
    if (!sa || !sb) {
      continue;
    }
    const double lo = std::max(std::floor(sa->first / res), std::floor(sb->first / res));
    const double hi = std::min(std::floor(sa->second / res), std::floor(sb->second / res));
    if (lo <= hi) {
      return true;
    }
  }
  return false;
}

inline double orient(P a, P b, P c)
{
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline bool inside_convex(const Quad & q, P p)
{
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < 4; ++i) {
    const double o = orient(q[i], q[(i + 1) % 4], p);
    pos = pos || o > 0;
    neg = neg || o < 0;
  }
  return !(pos && neg);
}

inline bool segments_cross(P a, P b, P c, P d)
{
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  return ((d1 > 0) != (d2 > 0) || d1 == 0 || d2 == 0) && ((d3 > 0) != (d4 > 0) || d3 == 0 || d4 == 0) &&
         std::min(a.x, b.x) <= std::max(c.x, d.x) && std::min(c.x, d.x) <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= std::max(c.y, d.y) && std::min(c.y, d.y) <= std::max(a.y, b.y);
}

/// Closed convex quads overlap iff an edge pair crosses or one holds a vertex of the other.
inline bool quads_overlap(const Quad & a, const Quad & b)
{
  for (std::size_t i = 0; i < 4; ++i) {
    if (inside_convex(b, a[i]) || inside_convex(a, b[i])) {
      return true;
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (segments_cross(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4])) {
        return true;
      }
    }
  }
  return false;
}

/// Winding-number containment with the boundary counted inside.
inline bool polygon_contains(const std::vector<P> & poly, P p)
{
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const P a = poly[i];
    const P b = poly[(i + 1) % n];
    if (std::abs(orient(a, b, p)) < 1e-12 && p.x >= std::min(a.x, b.x) - 1e-12 && p.x <= std::max(a.x, b.x) + 1e-12 &&
        p.y >= std::min(a.y, b.y) - 1e-12 && p.y <= std::max(a.y, b.y) + 1e-12) {
      return true;
    }
  }
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const P a = poly[i];
    const P b = poly[(i + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && orient(a, b, p) > 0) {
        ++winding;
      }
    } else if (b.y <= p.y && orient(a, b, p) < 0) {
      --winding;
    }
  }
  return winding != 0;
}

/// Bicycle model state (x, y, heading, speed) integrated by classical RK4.
struct BikeState
{
  double x;
  double y;
  double heading;
  double v;
};

inline BikeState rk4_bicycle(BikeState s, double accel, double steer, double lf, double lr, double duration, double h)
{
  const double beta = std::atan(lr * std::tan(steer) / (lf + lr));
  auto f = [&](const BikeState & q) {
    const double vdot = (q.v <= 0.0 && accel < 0.0) ? 0.0 : accel;
    const double v = std::max(q.v, 0.0);
    return BikeState{v * std::cos(q.heading + beta), v * std::sin(q.heading + beta), v * std::sin(beta) / lr, vdot};
  };
  auto add = [](const BikeState & a, const BikeState & d, double k) {
    return BikeState{a.x + k * d.x, a.y + k * d.y, a.heading + k * d.heading, a.v + k * d.v};
  };
  const auto steps = static_cast<long>(std::llround(duration / h));
  for (long i = 0; i < steps; ++i) {
    const BikeState k1 = f(s);
    const BikeState k2 = f(add(s, k1, h / 2));
    const BikeState k3 = f(add(s, k2, h / 2));
    const BikeState k4 = f(add(s, k3, h));
    s.x += h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    s.y += h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
    s.heading += h / 6 * (k1.heading + 2 * k2.heading + 2 * k3.heading + k4.heading);
    s.v = std::max(0.0, s.v + h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v));
  }
  return s;
}

/// Brute-force evaluation of the rule path: at every horizon step the whole
/// world is placed in closed form, then swept forward at `fine_dt` with
/// constant velocities until two footprints overlap.
struct RuleVerdict
{
  bool brake{false};
  double min_ttc{std::numeric_limits<double>::infinity()};
  std::vector<double> step_ttc;
  std::vector<bool> step_collision;
};

inline bool center_in_area(const std::vector<P> & area, double x, double y)
{
  return polygon_contains(area, {x, y});
}

inline RuleVerdict brute_force_rule(const dual_aeb::RuleInputs & in, double ttc_window, double fine_dt)
{
  std::vector<P> area;
  for (const auto v : in.area.vertices()) {
    area.push_back({v.x, v.y});
  }
  RuleVerdict out;
  const double ehl = in.ego_box.half_length();
  const double ehw = in.ego_box.half_width();
  const auto samples = static_cast<long>(std::floor(ttc_window / fine_dt + 1e-9));
  for (int k = 1; k <= in.horizon_steps; ++k) {
    const double t = k * in.dt;
    const auto & wp = in.plan.waypoints[static_cast<std::size_t>(k - 1)];
    const auto & prev = k == 1 ? in.ego_state.pose : in.plan.waypoints[static_cast<std::size_t>(k - 2)];
    const double speed = std::hypot(wp.x - prev.x, wp.y - prev.y) / in.dt;
    const double evx = speed * std::cos(wp.heading);
    const double evy = speed * std::sin(wp.heading);

    struct Placed
    {
      double x, y, heading, vx, vy, hl, hw, reach;
    };
    std::vector<Placed> placed;
    for (const auto & a : in.others) {
      const auto & c = a.box.center();
      const double x = c.x + a.velocity.x * t;
      const double y = c.y + a.velocity.y * t;
      if (!center_in_area(area, x, y)) {
        continue;
      }
      placed.push_back({x, y, c.heading + a.heading_rate * t, a.velocity.x, a.velocity.y, a.box.half_length(),
                        a.box.half_width(), std::hypot(a.box.half_length(), a.box.half_width())});
    }
    const double ereach = std::hypot(ehl, ehw);

    bool collided = false;
    const Quad ego_now = corners(wp.x, wp.y, wp.heading, ehl, ehw);
    for (const auto & p : placed) {
      collided = collided || quads_overlap(ego_now, corners(p.x, p.y, p.heading, p.hl, p.hw));
    }
    double ttc = std::numeric_limits<double>::infinity();
    for (long i = 1; i <= samples && !std::isfinite(ttc); ++i) {
      const double tau = static_cast<double>(i) * fine_dt;
      const double ex = wp.x + evx * tau;
      const double ey = wp.y + evy * tau;
      const Quad ego = corners(ex, ey, wp.heading, ehl, ehw);
      for (const auto & p : placed) {
        const double ax = p.x + p.vx * tau;
        const double ay = p.y + p.vy * tau;
        if (std::hypot(ax - ex, ay - ey) > ereach + p.reach + 1e-6) {
          continue;
        }
        if (quads_overlap(ego, corners(ax, ay, p.heading, p.hl, p.hw))) {
          ttc = tau;
          break;
        }
      }
    }
    out.step_ttc.push_back(ttc);
    out.step_collision.push_back(collided);
    out.min_ttc = std::min(out.min_ttc, ttc);
    out.brake = out.brake || collided || ttc < in.t_threshold;
  }
  return out;
}

}  // namespace oracle

#endif  // DUAL_AEB__TESTS__ORACLES_HPP_
