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

#include "dual_aeb/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace dual_aeb
{

using nlohmann::json;

ScenarioError::ScenarioError(std::string path, const std::string & what)
: std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path))
{
}

namespace
{

/// Read-only view of a JSON object that remembers its path for errors and
/// rejects keys nobody asked about.
class Reader
{
public:
  Reader(const json & j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) {
      throw ScenarioError(path_, "expected an object");
    }
  }

  std::string child(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }

  const json & raw(std::string_view key)
  {
    used_.insert(std::string(key));
    const auto it = j_.find(std::string(key));
    if (it == j_.end()) {
      throw ScenarioError(child(key), "missing required field");
    }
    return *it;
  }

  double number(std::string_view key)
  {
    const json & v = raw(key);
    if (!v.is_number()) {
      throw ScenarioError(child(key), "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      throw ScenarioError(child(key), "expected a finite number");
    }
    return d;
  }

  double number_or(std::string_view key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }

  std::string string(std::string_view key)
  {
    const json & v = raw(key);
    if (!v.is_string()) {
      throw ScenarioError(child(key), "expected a string");
    }
    return v.get<std::string>();
  }

  std::string string_or(std::string_view key, std::string fallback)
  {
    return has(key) ? string(key) : mark(key, std::move(fallback));
  }

  bool boolean_or(std::string_view key, bool fallback)
  {
    if (!has(key)) {
      return fallback;
    }
    const json & v = raw(key);
    if (!v.is_boolean()) {
      throw ScenarioError(child(key), "expected a boolean");
    }
    return v.get<bool>();
  }

  std::int64_t integer(std::string_view key)
  {
    const json & v = raw(key);
    if (!v.is_number_integer()) {
      throw ScenarioError(child(key), "expected an integer");
    }
    return v.get<std::int64_t>();
  }

  const json & array(std::string_view key)
  {
    const json & v = raw(key);
    if (!v.is_array()) {
      throw ScenarioError(child(key), "expected an array");
    }
    return v;
  }

  void finish() const
  {
    for (const auto & [key, value] : j_.items()) {
      if (!used_.contains(key)) {
        throw ScenarioError(child(key), "unknown field");
      }
    }
  }

private:
  template <typename T>
  T mark(std::string_view key, T value)
  {
    used_.insert(std::string(key));
    return value;
  }

  const json & j_;
  std::string path_;
  std::set<std::string> used_;
};

double positive(double v, const std::string & path)
{
  if (!(v > 0.0)) {
    throw ScenarioError(path, "must be > 0");
  }
  return v;
}

Vec2 parse_point(const json & j, const std::string & path)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ScenarioError(path, "expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Vec2> parse_points(const json & arr, const std::string & path)
{
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    pts.push_back(parse_point(arr[i], fmt::format("{}[{}]", path, i)));
  }
  return pts;
}

Route parse_route(const json & j, const std::string & path, const VehicleState & initial, double dt)
{
  Reader r(j, path);
  const std::string type = r.string("type");
  std::vector<Vec2> pts;
  if (type == "polyline") {
    pts = parse_points(r.array("points"), r.child("points"));
    if (pts.size() < 2) {
      throw ScenarioError(r.child("points"), "at least 2 points required");
    }
    if (norm(pts.front() - initial.pose.position()) > 1e-6) {
      throw ScenarioError(r.child("points"), "route must start at the ego position");
    }
  } else if (type == "bicycle") {
    const double sample_dt = positive(r.number_or("sample_dt", 0.1), r.child("sample_dt"));
    const json & controls = r.array("controls");
    VehicleState state = initial;
    state.speed = std::max(state.speed, 1.0);
    pts.push_back(state.pose.position());
    for (std::size_t i = 0; i < controls.size(); ++i) {
      Reader c(controls[i], fmt::format("{}[{}]", r.child("controls"), i));
      const Control u = clamp_control({c.number_or("accel", 0.0), c.number_or("steer", 0.0)});
      const double duration = positive(c.number("duration"), c.child("duration"));
      c.finish();
      const int samples = std::max(1, static_cast<int>(std::lround(duration / sample_dt)));
      for (int k = 0; k < samples; ++k) {
        state = integrate(state, u, duration / samples, 10);
        state.speed = std::max(state.speed, 0.5);
        pts.push_back(state.pose.position());
      }
    }
    if (pts.size() < 2) {
      throw ScenarioError(r.child("controls"), "at least one control required");
    }
  } else {
    throw ScenarioError(r.child("type"), "expected \"polyline\" or \"bicycle\"");
  }
  r.finish();
  (void)dt;
  return Route(std::move(pts));
}

AgentMotion parse_motion(const json & j, const std::string & path)
{
  Reader r(j, path);
  const std::string type = r.string("type");
  AgentMotion motion;
  if (type == "constant_twist") {
    ConstantTwistMotion m;
    m.start = Pose2D(r.number("x"), r.number("y"), r.number_or("heading", 0.0));
    m.velocity = {r.number_or("vx", 0.0), r.number_or("vy", 0.0)};
    m.heading_rate = r.number_or("heading_rate", 0.0);
    if (std::abs(m.heading_rate) > 2.0) {
      throw ScenarioError(r.child("heading_rate"), "|heading_rate| must be <= 2 rad/s");
    }
    motion = m;
  } else if (type == "waypoints") {
    WaypointMotion m;
    const json & knots = r.array("knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const std::string kp = fmt::format("{}[{}]", r.child("knots"), i);
      const json & k = knots[i];
      if (!k.is_array() || k.size() != 4 || !std::all_of(k.begin(), k.end(), [](const json & v) { return v.is_number(); })) {
        throw ScenarioError(kp, "expected [t, x, y, heading]");
      }
      const double t = k[0].get<double>();
      if (!m.knots.empty() && !(t > m.knots.back().t)) {
        throw ScenarioError(kp, "knot times must be strictly increasing");
      }
      m.knots.push_back({t, Pose2D(k[1].get<double>(), k[2].get<double>(), k[3].get<double>())});
    }
    if (m.knots.empty()) {
      throw ScenarioError(r.child("knots"), "at least one knot required");
    }
    motion = m;
  } else if (type == "longitudinal") {
    LongitudinalMotion m;
    m.start = Pose2D(r.number("x"), r.number("y"), r.number_or("heading", 0.0));
    m.speed = r.number_or("speed", 0.0);
    if (m.speed < 0.0) {
      throw ScenarioError(r.child("speed"), "must be >= 0");
    }
    if (r.has("events")) {
      const json & events = r.array("events");
      for (std::size_t i = 0; i < events.size(); ++i) {
        const std::string ep = fmt::format("{}[{}]", r.child("events"), i);
        const json & e = events[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
          throw ScenarioError(ep, "expected [t, accel]");
        }
        const double t = e[0].get<double>();
        if (!m.events.empty() && !(t > m.events.back().t)) {
          throw ScenarioError(ep, "event times must be strictly increasing");
        }
        m.events.push_back({t, e[1].get<double>()});
      }
    }
    motion = m;
  } else {
    throw ScenarioError(r.child("type"), "expected \"constant_twist\", \"waypoints\" or \"longitudinal\"");
  }
  r.finish();
  return motion;
}

json motion_to_json(const AgentMotion & motion)
{
  return std::visit(
    [](const auto & m) -> json {
      using T = std::decay_t<decltype(m)>;
      if constexpr (std::is_same_v<T, ConstantTwistMotion>) {
        return {{"type", "constant_twist"}, {"x", m.start.x}, {"y", m.start.y}, {"heading", m.start.heading},
                {"vx", m.velocity.x}, {"vy", m.velocity.y}, {"heading_rate", m.heading_rate}};
      } else if constexpr (std::is_same_v<T, WaypointMotion>) {
        json knots = json::array();
        for (const auto & k : m.knots) {
          knots.push_back({k.t, k.pose.x, k.pose.y, k.pose.heading});
        }
        return {{"type", "waypoints"}, {"knots", knots}};
      } else {
        json events = json::array();
        for (const auto & e : m.events) {
          events.push_back({e.t, e.accel});
        }
        return {{"type", "longitudinal"}, {"x", m.start.x}, {"y", m.start.y}, {"heading", m.start.heading},
                {"speed", m.speed}, {"events", events}};
      }
    },
    motion);
}

}  // namespace

Route::Route(std::vector<Vec2> points) : points_(std::move(points))
{
  if (points_.size() < 2) {
    throw std::invalid_argument("Route: at least 2 points required");
  }
  cumulative_.reserve(points_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double seg = norm(points_[i] - points_[i - 1]);
    if (!(seg > 0.0)) {
      throw std::invalid_argument("Route: consecutive points must differ");
    }
    cumulative_.push_back(cumulative_.back() + seg);
  }
}

Pose2D Route::pose_at(double s) const
{
  std::size_t seg = 0;
  if (s >= cumulative_.back()) {
    seg = points_.size() - 2;
  } else if (s > 0.0) {
    seg = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), s) - cumulative_.begin()) - 1;
  }
  const Vec2 a = points_[seg];
  const Vec2 b = points_[seg + 1];
  const double len = cumulative_[seg + 1] - cumulative_[seg];
  const Vec2 dir = (1.0 / len) * (b - a);
  const Vec2 p = a + (s - cumulative_[seg]) * dir;
  return Pose2D(p.x, p.y, std::atan2(dir.y, dir.x));
}

double Route::project(Vec2 p) const
{
  double best_s = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2 a = points_[i];
    const Vec2 ab = points_[i + 1] - a;
    const double len2 = dot(ab, ab);
    double u = dot(p - a, ab) / len2;
    const bool first = i == 0;
    const bool last = i + 2 == points_.size();
    if (!first) {
      u = std::max(u, 0.0);
    }
    if (!last) {
      u = std::min(u, 1.0);
    }
    const double d = norm(a + u * ab - p);
    if (d < best_d) {
      best_d = d;
      best_s = cumulative_[i] + u * std::sqrt(len2);
    }
  }
  return best_s;
}

int Scenario::tick_count() const
{
  return static_cast<int>(std::ceil(duration / dt - 1e-9));
}

double Scenario::route_goal_length() const
{
  if (goal) {
    return ego.route.project(goal->position);
  }
  return ego.route.length();
}

const AgentSpec * Scenario::find_agent(std::string_view id) const
{
  for (const auto & a : agents) {
    if (a.id == id) {
      return &a;
    }
  }
  return nullptr;
}

RuleConfig parse_rule_config(const json & j, RuleConfig base, const std::string & path)
{
  Reader r(j, path);
  base.dt = positive(r.number_or("dt", base.dt), r.child("dt"));
  if (r.has("horizon_steps")) {
    const auto h = r.integer("horizon_steps");
    if (h < 1) {
      throw ScenarioError(r.child("horizon_steps"), "must be >= 1");
    }
    base.horizon_steps = static_cast<int>(h);
  }
  base.t_threshold = positive(r.number_or("t_threshold", base.t_threshold), r.child("t_threshold"));
  base.t_warning = positive(r.number_or("t_warning", base.t_warning), r.child("t_warning"));
  base.t_emergency = positive(r.number_or("t_emergency", base.t_emergency), r.child("t_emergency"));
  base.ttc_window = positive(r.number_or("ttc_window", base.ttc_window), r.child("ttc_window"));
  base.fine_dt = positive(r.number_or("fine_dt", base.fine_dt), r.child("fine_dt"));
  base.v_max = positive(r.number_or("v_max", base.v_max), r.child("v_max"));
  r.finish();
  if (base.fine_dt > base.dt + 1e-12) {
    throw ScenarioError(r.child("fine_dt"), "must be <= dt");
  }
  return base;
}

ArbiterConfig parse_arbiter_config(const json & j, ArbiterConfig base, const std::string & path)
{
  Reader r(j, path);
  base.trigger_interval = r.number_or("trigger_interval", base.trigger_interval);
  base.slow_deadline = r.number_or("slow_deadline", base.slow_deadline);
  base.brake_threshold = r.number_or("brake_threshold", base.brake_threshold);
  base.decel_emergency = r.number_or("decel_emergency", base.decel_emergency);
  base.decel_warning = r.number_or("decel_warning", base.decel_warning);
  base.decel_max = r.number_or("decel_max", base.decel_max);
  r.finish();
  try {
    base.validate();
  } catch (const std::invalid_argument & e) {
    throw ScenarioError(path, e.what());
  }
  return base;
}

json to_json(const RuleConfig & cfg)
{
  return {{"dt", cfg.dt},
          {"horizon_steps", cfg.horizon_steps},
          {"t_threshold", cfg.t_threshold},
          {"t_warning", cfg.t_warning},
          {"t_emergency", cfg.t_emergency},
          {"ttc_window", cfg.ttc_window},
          {"fine_dt", cfg.fine_dt},
          {"v_max", cfg.v_max}};
}

json to_json(const ArbiterConfig & cfg)
{
  return {{"trigger_interval", cfg.trigger_interval}, {"slow_deadline", cfg.slow_deadline},
          {"brake_threshold", cfg.brake_threshold},   {"decel_emergency", cfg.decel_emergency},
          {"decel_warning", cfg.decel_warning},       {"decel_max", cfg.decel_max}};
}

Scenario parse_scenario(const json & doc)
{
  Reader r(doc, "");
  Scenario sc;
  sc.schema_version = static_cast<int>(r.integer("schema_version"));
  if (sc.schema_version != kScenarioSchemaVersion) {
    throw ScenarioError("schema_version", fmt::format("unsupported version {}", sc.schema_version));
  }
  sc.name = r.string("name");
  if (sc.name.empty()) {
    throw ScenarioError("name", "must be non-empty");
  }
  if (r.has("seed")) {
    const json & seed = r.raw("seed");
    if (seed.is_number_unsigned()) {
      sc.seed = seed.get<std::uint64_t>();
    } else if (r.integer("seed") < 0) {
      throw ScenarioError("seed", "must be >= 0");
    }
  }
  sc.dt = positive(r.number_or("dt", 0.2), "dt");
  sc.duration = r.number("duration");
  if (sc.duration < sc.dt) {
    throw ScenarioError("duration", "must be >= dt");
  }

  try {
    sc.map = Polygon(parse_points(r.array("map"), "map"));
  } catch (const std::invalid_argument & e) {
    throw ScenarioError("map", e.what());
  }

  if (r.has("metadata")) {
    const json & meta = r.raw("metadata");
    if (!meta.is_object()) {
      throw ScenarioError("metadata", "expected an object");
    }
    for (const auto & [k, v] : meta.items()) {
      if (!v.is_string()) {
        throw ScenarioError("metadata." + k, "expected a string");
      }
      sc.metadata[k] = v.get<std::string>();
    }
  }

  if (r.has("camera")) {
    Reader c(r.raw("camera"), "camera");
    sc.camera.focal_px = positive(c.number_or("focal_px", sc.camera.focal_px), "camera.focal_px");
    sc.camera.width_px = positive(c.number_or("width_px", sc.camera.width_px), "camera.width_px");
    sc.camera.height_px = positive(c.number_or("height_px", sc.camera.height_px), "camera.height_px");
    sc.camera.mount_height = positive(c.number_or("mount_height", sc.camera.mount_height), "camera.mount_height");
    sc.camera.max_range = positive(c.number_or("max_range", sc.camera.max_range), "camera.max_range");
    c.finish();
  }

  if (r.has("ground_truth")) {
    Reader g(r.raw("ground_truth"), "ground_truth");
    sc.ground_truth.t_emergency = positive(g.number_or("t_emergency", 1.5), "ground_truth.t_emergency");
    sc.ground_truth.t_warning = positive(g.number_or("t_warning", 3.0), "ground_truth.t_warning");
    g.finish();
  }
  if (r.has("rule")) {
    sc.rule = parse_rule_config(r.raw("rule"), RuleConfig{}, "rule");
  }
  if (r.has("arbiter")) {
    sc.arbiter = parse_arbiter_config(r.raw("arbiter"), ArbiterConfig{}, "arbiter");
  }

  {
    Reader e(r.raw("ego"), "ego");
    EgoSpec ego;
    ego.initial.pose = Pose2D(e.number("x"), e.number("y"), e.number_or("heading", 0.0));
    ego.initial.speed = e.number_or("speed", 0.0);
    if (ego.initial.speed < 0.0) {
      throw ScenarioError("ego.speed", "must be >= 0");
    }
    ego.initial.lf = positive(e.number_or("lf", kDefaultAxleToCg), "ego.lf");
    ego.initial.lr = positive(e.number_or("lr", kDefaultAxleToCg), "ego.lr");
    ego.length = positive(e.number_or("length", ego.length), "ego.length");
    ego.width = positive(e.number_or("width", ego.width), "ego.width");
    ego.target_speed = e.number_or("target_speed", ego.initial.speed);
    if (ego.target_speed < 0.0) {
      throw ScenarioError("ego.target_speed", "must be >= 0");
    }
    ego.plan_accel = positive(e.number_or("plan_accel", ego.plan_accel), "ego.plan_accel");
    if (e.has("route")) {
      ego.route = parse_route(e.raw("route"), "ego.route", ego.initial, sc.dt);
    } else {
      const Pose2D & p = ego.initial.pose;
      const double reach = 2000.0;
      ego.route = Route({p.position(), p.position() + reach * Vec2{std::cos(p.heading), std::sin(p.heading)}});
    }
    e.finish();
    sc.ego = std::move(ego);
  }

  if (r.has("goal")) {
    Reader g(r.raw("goal"), "goal");
    sc.goal = Goal{{g.number("x"), g.number("y")}, positive(g.number_or("radius", 3.0), "goal.radius")};
    g.finish();
  }

  if (r.has("agents")) {
    const json & agents = r.array("agents");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const std::string ap = fmt::format("agents[{}]", i);
      Reader a(agents[i], ap);
      AgentSpec spec;
      spec.id = a.string("id");
      if (spec.id.empty() || !ids.insert(spec.id).second) {
        throw ScenarioError(a.child("id"), "must be non-empty and unique");
      }
      spec.category = a.string_or("category", spec.category);
      spec.color = a.string_or("color", "");
      spec.descriptor = a.string_or("descriptor", "");
      spec.length = positive(a.number_or("length", spec.length), a.child("length"));
      spec.width = positive(a.number_or("width", spec.width), a.child("width"));
      spec.height = positive(a.number_or("height", spec.height), a.child("height"));
      spec.motion = parse_motion(a.raw("motion"), a.child("motion"));
      spec.ghost = a.boolean_or("ghost", false);
      if (a.has("hidden_until")) {
        spec.hidden_until = a.number("hidden_until");
      }
      spec.signal = a.string_or("signal", "none");
      spec.intention = a.string_or("intention", "");
      a.finish();
      sc.agents.push_back(std::move(spec));
    }
  }
  r.finish();
  return sc;
}

Scenario load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("", fmt::format("cannot open scenario file {}", path.string()));
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ScenarioError("", fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return parse_scenario(doc);
}

std::vector<std::filesystem::path> scenario_files(const std::filesystem::path & path)
{
  std::vector<std::filesystem::path> out;
  if (std::filesystem::is_directory(path)) {
    for (const auto & entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        out.push_back(entry.path());
      }
    }
    std::sort(out.begin(), out.end());
  } else {
    out.push_back(path);
  }
  return out;
}

std::vector<Scenario> load_scenarios(std::span<const std::filesystem::path> paths)
{
  std::vector<std::string> missing;
  for (const auto & p : paths) {
    if (!std::filesystem::exists(p)) {
      missing.push_back(p.string());
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto & m : missing) {
      list += list.empty() ? m : ", " + m;
    }
    throw ScenarioError("", fmt::format("missing scenario files: {}", list));
  }
  std::vector<Scenario> out;
  out.reserve(paths.size());
  for (const auto & p : paths) {
    out.push_back(load_scenario(p));
  }
  return out;
}

json scenario_to_json(const Scenario & sc)
{
  json map = json::array();
  for (const Vec2 v : sc.map.vertices()) {
    map.push_back({v.x, v.y});
  }
  json route_pts = json::array();
  for (const Vec2 v : sc.ego.route.points()) {
    route_pts.push_back({v.x, v.y});
  }
  json agents = json::array();
  for (const auto & a : sc.agents) {
    json j = {{"id", a.id},         {"category", a.category}, {"color", a.color},   {"descriptor", a.descriptor},
              {"length", a.length}, {"width", a.width},       {"height", a.height}, {"motion", motion_to_json(a.motion)},
              {"ghost", a.ghost},   {"signal", a.signal},     {"intention", a.intention}};
    if (a.hidden_until) {
      j["hidden_until"] = *a.hidden_until;
    }
    agents.push_back(std::move(j));
  }
  json doc = {
    {"schema_version", sc.schema_version},
    {"name", sc.name},
    {"seed", sc.seed},
    {"dt", sc.dt},
    {"duration", sc.duration},
    {"map", map},
    {"metadata", sc.metadata},
    {"camera",
     {{"focal_px", sc.camera.focal_px},
      {"width_px", sc.camera.width_px},
      {"height_px", sc.camera.height_px},
      {"mount_height", sc.camera.mount_height},
      {"max_range", sc.camera.max_range}}},
    {"ground_truth", {{"t_emergency", sc.ground_truth.t_emergency}, {"t_warning", sc.ground_truth.t_warning}}},
    {"ego",
     {{"x", sc.ego.initial.pose.x},
      {"y", sc.ego.initial.pose.y},
      {"heading", sc.ego.initial.pose.heading},
      {"speed", sc.ego.initial.speed},
      {"lf", sc.ego.initial.lf},
      {"lr", sc.ego.initial.lr},
      {"length", sc.ego.length},
      {"width", sc.ego.width},
      {"target_speed", sc.ego.target_speed},
      {"plan_accel", sc.ego.plan_accel},
      {"route", {{"type", "polyline"}, {"points", route_pts}}}}},
    {"agents", agents},
  };
  if (sc.goal) {
    doc["goal"] = {{"x", sc.goal->position.x}, {"y", sc.goal->position.y}, {"radius", sc.goal->radius}};
  }
  if (sc.rule) {
    doc["rule"] = to_json(*sc.rule);
  }
  if (sc.arbiter) {
    doc["arbiter"] = to_json(*sc.arbiter);
  }
  return doc;
}

}  // namespace dual_aeb
