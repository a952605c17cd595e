#include "vlcloc/core.hpp"

#include <algorithm>

#include "vlcloc/error.hpp"

namespace vlcloc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BehindBaseline: return "BehindBaseline";
    case ErrorCode::NonPositiveSpot: return "NonPositiveSpot";
    case ErrorCode::BijectionViolated: return "BijectionViolated";
    case ErrorCode::ZeroIllumination: return "ZeroIllumination";
    case ErrorCode::LinkDown: return "LinkDown";
    case ErrorCode::DecodeFailure: return "DecodeFailure";
    case ErrorCode::InvalidPower: return "InvalidPower";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::NegativeRange: return "NegativeRange";
    case ErrorCode::Unavailable: return "Unavailable";
    case ErrorCode::SingularFim: return "SingularFim";
    case ErrorCode::InsufficientTrials: return "InsufficientTrials";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

double normalize_angle(double rad) {
  double a = std::remainder(rad, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

void VehicleGeometry::validate() const {
  if (!(rx_separation > 0.0) || !(tx_separation > 0.0) || !(body_length > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "vehicle geometry lengths must be positive");
  }
}

RelativeTargetState relative_tx_positions(const VehiclePose& ego, const VehiclePose& target,
                                          const VehicleGeometry& geom, LightMount mount) {
  const double half_len = 0.5 * geom.body_length;
  const double half_d = 0.5 * geom.tx_separation;
  const Vec2 qrx1 = ego.to_parent({-0.5 * geom.rx_separation, half_len});

  Vec2 tx1_world, tx2_world;
  double facing_world = 0.0;
  if (mount == LightMount::Tail) {
    tx1_world = target.to_parent({-half_d, -half_len});
    tx2_world = target.to_parent({half_d, -half_len});
    facing_world = target.heading + kPi;
  } else {
    tx1_world = target.to_parent({half_d, half_len});
    tx2_world = target.to_parent({-half_d, half_len});
    facing_world = target.heading;
  }

  const Vec2 right = ego.right();
  const Vec2 fwd = ego.forward();
  auto to_ego = [&](Vec2 w) {
    const Vec2 d = w - qrx1;
    return Vec2{d.dot(right), d.dot(fwd)};
  };

  RelativeTargetState s;
  s.p1 = to_ego(tx1_world);
  s.p2 = to_ego(tx2_world);
  s.facing1 = s.facing2 = normalize_angle(facing_world - ego.heading);
  return s;
}

double true_aoa(Vec2 p, int rx_index, double rx_separation) {
  if (!(p.y > 0.0)) {
    throw Error(ErrorCode::BehindBaseline, "TX must lie ahead of the receiver baseline");
  }
  const double x = rx_index == 1 ? p.x : p.x - rx_separation;
  return std::atan2(x, p.y);
}

double emission_angle(double tx_facing, Vec2 tx_pos, Vec2 rx_pos) {
  const Vec2 ray = rx_pos - tx_pos;
  const double c = heading_vector(tx_facing).dot(ray) / ray.norm();
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double incidence_angle(Vec2 tx_pos, Vec2 rx_pos) {
  const Vec2 ray = tx_pos - rx_pos;
  return std::acos(std::clamp(ray.y / ray.norm(), -1.0, 1.0));
}

bool link_visible(double tx_facing, Vec2 tx_pos, Vec2 rx_pos, double emission_half_angle,
                  double rx_fov) {
  return emission_angle(tx_facing, tx_pos, rx_pos) < emission_half_angle &&
         incidence_angle(tx_pos, rx_pos) < rx_fov;
}

}  // namespace vlcloc
