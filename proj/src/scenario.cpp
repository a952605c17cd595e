#include "vlcloc/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "vlcloc/error.hpp"

namespace vlcloc {

namespace {

constexpr double kMaxCurvature = 0.2;                 // 1/m
constexpr double kCurvatureCheckSpeed = 30.0 / 3.6;   // m/s

Vec2 to_local(const VehiclePose& frame, Vec2 world) {
  const Vec2 d = world - frame.position();
  return {d.dot(frame.right()), d.dot(frame.forward())};
}

void check_plausible(double speed_mps, std::span<const MotionSegment> segments) {
  double v = speed_mps;
  for (const auto& s : segments) {
    const double v_end = std::max(0.0, v + s.accel_mps2 * s.duration_s);
    if (std::max(v, v_end) >= kCurvatureCheckSpeed && std::abs(s.curvature_per_m) > kMaxCurvature) {
      throw Error(ErrorCode::InvalidParams,
                  "curvature exceeds 0.2 /m at >= 30 km/h (small-sideslip bound)");
    }
    v = v_end;
  }
}

// Curvature of two mirrored arcs of length l each that together shift the path sideways by
// `lateral` and restore the heading.
double s_curve_curvature(double lateral, double arc_length) {
  auto shift = [&](double k) { return 2.0 * (1.0 - std::cos(k * arc_length)) / k; };
  double lo = 1e-9;
  double hi = 0.5 * kPi / arc_length;  // heading at the inflection stays below 90 deg
  if (shift(hi) < lateral) {
    throw Error(ErrorCode::InvalidParams, "lane change too short for the requested lateral shift");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shift(mid) < lateral ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ScenarioTrajectory assemble(const std::vector<VehiclePose>& ego,
                            const std::vector<VehiclePose>& target, double dt) {
  ScenarioTrajectory traj;
  traj.dt = dt;
  const std::size_t n = std::min(ego.size(), target.size());
  traj.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    traj.samples.push_back({dt * static_cast<double>(k), ego[k], target[k]});
  }
  return traj;
}

}  // namespace

std::string_view to_string(ScenarioPreset p) {
  switch (p) {
    case ScenarioPreset::SM1: return "SM1";
    case ScenarioPreset::SM2: return "SM2";
    case ScenarioPreset::SM3: return "SM3";
    case ScenarioPreset::SM4: return "SM4";
  }
  return "SM1";
}

ScenarioPreset parse_preset(std::string_view s) {
  if (s == "SM1" || s == "sm1") return ScenarioPreset::SM1;
  if (s == "SM2" || s == "sm2") return ScenarioPreset::SM2;
  if (s == "SM3" || s == "sm3") return ScenarioPreset::SM3;
  if (s == "SM4" || s == "sm4") return ScenarioPreset::SM4;
  throw Error(ErrorCode::InvalidConfig, "unknown scenario preset '" + std::string(s) + "'");
}

std::vector<double> Sm4Params::default_headings() {
  std::vector<double> h(10);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = -30.0 + 60.0 * static_cast<double>(i) / 9.0;
  return h;
}

std::pair<VehiclePose, VehiclePose> ScenarioTrajectory::pose_at(double t) const {
  if (samples.empty()) throw Error(ErrorCode::InvalidParams, "empty trajectory");
  if (t <= samples.front().t) return {samples.front().ego, samples.front().target};
  if (t >= samples.back().t) return {samples.back().ego, samples.back().target};
  const auto k = std::min(samples.size() - 2, static_cast<std::size_t>(t / dt));
  const auto& a = samples[k];
  const auto& b = samples[k + 1];
  const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
  auto lerp = [u](const VehiclePose& p, const VehiclePose& q) {
    return VehiclePose(p.x + u * (q.x - p.x), p.y + u * (q.y - p.y),
                       p.heading + u * normalize_angle(q.heading - p.heading));
  };
  return {lerp(a.ego, b.ego), lerp(a.target, b.target)};
}

std::vector<double> ScenarioTrajectory::relative_speed() const {
  std::vector<double> v(samples.size(), 0.0);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const Vec2 a = to_local(samples[k - 1].ego, samples[k - 1].target.position());
    const Vec2 b = to_local(samples[k].ego, samples[k].target.position());
    v[k] = (b - a).norm() / (samples[k].t - samples[k - 1].t);
  }
  if (v.size() > 1) v[0] = v[1];
  return v;
}

std::string ScenarioTrajectory::phase_at(double t) const {
  for (const auto& p : phases)
    if (t >= p.t_begin && t < p.t_end) return p.label;
  if (!phases.empty() && t >= phases.back().t_end) return phases.back().label;
  return {};
}

std::vector<VehiclePose> integrate_path(const VehiclePose& start, double speed_mps,
                                        std::span<const MotionSegment> segments, double dt) {
  constexpr int kSubsteps = 20;
  const double h = dt / kSubsteps;
  double total = 0.0;
  for (const auto& s : segments) total += s.duration_s;
  const auto n_out = static_cast<std::size_t>(std::llround(total / dt)) + 1;

  std::vector<VehiclePose> out;
  out.reserve(n_out);
  double x = start.x, y = start.y, heading = start.heading, v = speed_mps;
  std::size_t seg = 0;
  double seg_left = segments.empty() ? 0.0 : segments[0].duration_s;
  out.emplace_back(x, y, heading);
  for (std::size_t k = 1; k < n_out; ++k) {
    for (int sub = 0; sub < kSubsteps; ++sub) {
      while (seg < segments.size() && seg_left <= 1e-12) {
        ++seg;
        if (seg < segments.size()) seg_left = segments[seg].duration_s;
      }
      const MotionSegment cur = seg < segments.size() ? segments[seg] : MotionSegment{};
      const double v_next = std::max(0.0, v + cur.accel_mps2 * h);
      const double ds = 0.5 * (v + v_next) * h;
      const double h_mid = heading + 0.5 * cur.curvature_per_m * ds;
      x += -std::sin(h_mid) * ds;
      y += std::cos(h_mid) * ds;
      heading += cur.curvature_per_m * ds;
      v = v_next;
      seg_left -= h;
    }
    out.emplace_back(x, y, heading);
  }
  return out;
}

StaticLocation make_static_location(double x_m, double y_m, double heading, double body_length) {
  StaticLocation loc;
  loc.x_m = x_m;
  loc.y_m = y_m;
  loc.heading = heading;
  loc.ego = VehiclePose(0.0, 0.0, 0.0);
  const Vec2 rear{x_m, 0.5 * body_length + y_m};
  const Vec2 centre = rear + heading_vector(heading) * (0.5 * body_length);
  loc.target = VehiclePose(centre.x, centre.y, heading);
  return loc;
}

Scenario gen_scenario(ScenarioPreset preset, const ScenarioParams& p) {
  if (!(p.sample_dt_s > 0.0) || !(p.duration_s > p.sample_dt_s) || !(p.body_length_m > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "scenario duration / sampling / length invalid");
  }
  Scenario sc;
  sc.preset = preset;
  const double len = p.body_length_m;
  const double dur = p.duration_s;

  switch (preset) {
    case ScenarioPreset::SM1: {
      const auto& q = p.sm1;
      if (!(q.turn_duration_s > 0.0 && q.turn_duration_s <= dur) || !(q.initial_gap_m > 0.0) ||
          q.target_decel_mps2 < 0.0 || !(q.ego_speed_mps > 0.0)) {
        throw Error(ErrorCode::InvalidParams, "SM1 parameters out of range");
      }
      const double psi0 = deg2rad(q.initial_heading_deg);
      const double t = q.turn_duration_s;
      const double arc = q.ego_speed_mps * t - 0.5 * q.target_decel_mps2 * t * t;
      const std::vector<MotionSegment> tseg{{t, -q.target_decel_mps2, -psi0 / arc},
                                            {dur - t, -q.target_decel_mps2, 0.0}};
      const std::vector<MotionSegment> eseg{{dur, 0.0, 0.0}};
      check_plausible(q.ego_speed_mps, tseg);
      auto target = integrate_path(VehiclePose(0.0, len + q.initial_gap_m, psi0), q.ego_speed_mps,
                                   tseg, p.sample_dt_s);
      // Shift sideways so the cut-in ends on the ego lane centre.
      const double shift = -target.back().x;
      for (auto& pose : target) pose.x += shift;
      const auto ego = integrate_path(VehiclePose(0.0, 0.0, 0.0), q.ego_speed_mps, eseg,
                                      p.sample_dt_s);
      sc.trajectory = assemble(ego, target, p.sample_dt_s);
      sc.trajectory->phases = {{0.0, 0.3 * dur, "start"},
                               {0.3 * dur, 0.7 * dur, "dynamic"},
                               {0.7 * dur, dur, "end"}};
      break;
    }
    case ScenarioPreset::SM2: {
      const auto& q = p.sm2;
      if (!(q.lane_change_s > 0.0) || 2.0 * q.lane_change_s >= dur || !(q.gap_m > 0.0) ||
          !(q.speed_mps > 0.0) || !(q.lane_width_m > 0.0) || q.exit_decel_mps2 < 0.0) {
        throw Error(ErrorCode::InvalidParams, "SM2 parameters out of range");
      }
      const double half = 0.5 * q.lane_change_s;
      const double k = s_curve_curvature(q.lane_width_m, q.speed_mps * half);
      const double a = -q.exit_decel_mps2;
      const std::vector<MotionSegment> tseg{{half, 0.0, -k},
                                            {half, 0.0, k},
                                            {dur - 2.0 * q.lane_change_s, 0.0, 0.0},
                                            {half, a, -k},
                                            {half, a, k}};
      const std::vector<MotionSegment> eseg{{dur, 0.0, 0.0}};
      check_plausible(q.speed_mps, tseg);
      const auto target = integrate_path(VehiclePose(-q.lane_width_m, len + q.gap_m, 0.0),
                                         q.speed_mps, tseg, p.sample_dt_s);
      const auto ego = integrate_path(VehiclePose(0.0, 0.0, 0.0), q.speed_mps, eseg,
                                      p.sample_dt_s);
      sc.trajectory = assemble(ego, target, p.sample_dt_s);
      sc.trajectory->phases = {{0.0, q.lane_change_s, "formation"},
                               {q.lane_change_s, dur - q.lane_change_s, "platooning"},
                               {dur - q.lane_change_s, dur, "dispersion"}};
      break;
    }
    case ScenarioPreset::SM3: {
      const auto& q = p.sm3;
      if (q.locations < 2 || !(q.gap_m > 0.0) || q.lateral_max_m < 0.0) {
        throw Error(ErrorCode::InvalidParams, "SM3 parameters out of range");
      }
      for (std::size_t k = 0; k < q.locations; ++k) {
        const double x = q.lateral_max_m * static_cast<double>(k) /
                         static_cast<double>(q.locations - 1);
        sc.locations.push_back(make_static_location(x, q.gap_m, 0.0, len));
      }
      break;
    }
    case ScenarioPreset::SM4: {
      const auto& q = p.sm4;
      if (!(q.step_m > 0.0) || !(q.half_width_m >= 0.0) || !(q.max_range_m > q.step_m) ||
          q.headings_deg.empty()) {
        throw Error(ErrorCode::InvalidParams, "SM4 parameters out of range");
      }
      const auto nx = static_cast<long>(std::floor(q.half_width_m / q.step_m + 1e-9));
      const auto ny = static_cast<long>(std::floor(q.max_range_m / q.step_m + 1e-9));
      for (long iy = 1; iy <= ny; ++iy)
        for (long ix = -nx; ix <= nx; ++ix)
          for (double hd : q.headings_deg)
            sc.locations.push_back(make_static_location(static_cast<double>(ix) * q.step_m,
                                                        static_cast<double>(iy) * q.step_m,
                                                        deg2rad(hd), len));
      break;
    }
  }
  return sc;
}

}  // namespace vlcloc
