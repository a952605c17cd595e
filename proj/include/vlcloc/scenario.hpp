#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vlcloc/core.hpp"

namespace vlcloc {

enum class ScenarioPreset { SM1, SM2, SM3, SM4 };

std::string_view to_string(ScenarioPreset p);
ScenarioPreset parse_preset(std::string_view s);

/// Constant-acceleration, constant-curvature piece of a planar path.
struct MotionSegment {
  double duration_s = 0.0;
  double accel_mps2 = 0.0;
  double curvature_per_m = 0.0;  ///< positive turns left (counterclockwise)
};

struct TrajectorySample {
  double t = 0.0;
  VehiclePose ego;
  VehiclePose target;
};

struct TrajectoryPhase {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::string label;
};

struct ScenarioTrajectory {
  std::vector<TrajectorySample> samples;  ///< strictly increasing t
  double dt = 0.0;
  std::vector<TrajectoryPhase> phases;

  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
  /// Linear interpolation of both poses, clamped to the sampled span.
  std::pair<VehiclePose, VehiclePose> pose_at(double t) const;
  /// Speed of the target relative to the ego, from finite differences of ego-frame positions.
  std::vector<double> relative_speed() const;
  /// Label of the phase containing t, or empty.
  std::string phase_at(double t) const;
};

/// Static ego/target arrangement. (x_m, y_m) locate the target's rear bumper centre relative
/// to the ego front bumper centre in the ego frame; heading rotates the target about that point.
struct StaticLocation {
  double x_m = 0.0;
  double y_m = 0.0;
  double heading = 0.0;
  VehiclePose ego;
  VehiclePose target;
};

/// Collision avoidance: target cuts in from the left lane while braking.
struct Sm1Params {
  double ego_speed_mps = 25.0;
  double initial_gap_m = 4.0;          ///< target rear to ego front
  double initial_heading_deg = -15.0;  ///< target already angled into the ego lane
  double turn_duration_s = 0.4;
  double target_decel_mps2 = 5.0;
};

/// Platooning: target merges in from the left, follows straight, leaves to the right.
struct Sm2Params {
  double speed_mps = 25.0;
  double gap_m = 3.5;
  double lane_width_m = 3.5;
  double lane_change_s = 0.35;
  double exit_decel_mps2 = 0.0;
};

/// Parallel static vehicles, lateral offset swept from 0 to lateral_max_m.
struct Sm3Params {
  double gap_m = 5.0;
  double lateral_max_m = 3.5;
  std::size_t locations = 1000;
};

/// Exhaustive static grid over the neighbouring lanes.
struct Sm4Params {
  double half_width_m = 3.0;
  double max_range_m = 15.0;
  double step_m = 0.5;
  std::vector<double> headings_deg = default_headings();

  /// Ten headings evenly spaced over [-30, 30] degrees.
  static std::vector<double> default_headings();
};

struct ScenarioParams {
  double duration_s = 1.0;
  double sample_dt_s = 1e-3;
  Sm1Params sm1;
  Sm2Params sm2;
  Sm3Params sm3;
  Sm4Params sm4;
  double body_length_m = 5.0;
};

struct Scenario {
  ScenarioPreset preset = ScenarioPreset::SM1;
  std::optional<ScenarioTrajectory> trajectory;  ///< SM1, SM2
  std::vector<StaticLocation> locations;         ///< SM3, SM4
};

/// Integrates a kinematic single-track path (pose reference at the vehicle centre),
/// emitting a pose every `dt`. Speed never drops below zero.
std::vector<VehiclePose> integrate_path(const VehiclePose& start, double speed_mps,
                                        std::span<const MotionSegment> segments, double dt);

/// Places a target for a static location (see StaticLocation).
StaticLocation make_static_location(double x_m, double y_m, double heading, double body_length);

/// Throws InvalidParams when parameters are out of range or a path violates the
/// small-sideslip bound |curvature| <= 0.2 /m at speeds >= 30 km/h.
Scenario gen_scenario(ScenarioPreset preset, const ScenarioParams& params);

}  // namespace vlcloc
