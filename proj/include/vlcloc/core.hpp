#pragma once

#include <cmath>
#include <numbers>

namespace vlcloc {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double rad);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

/// Unit vector pointing along `heading` (0 = +y, counterclockwise positive).
inline Vec2 heading_vector(double heading) { return {-std::sin(heading), std::cos(heading)}; }

/// Pose of a vehicle's geometric center in a planar frame.
/// x is lateral (rightward positive), y longitudinal (forward positive).
struct VehiclePose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  VehiclePose() = default;
  VehiclePose(double x_, double y_, double heading_)
      : x(x_), y(y_), heading(normalize_angle(heading_)) {}

  Vec2 position() const { return {x, y}; }
  Vec2 forward() const { return heading_vector(heading); }
  Vec2 right() const { return {std::cos(heading), std::sin(heading)}; }
  /// Maps a vehicle-frame offset (right, forward) into this pose's parent frame.
  Vec2 to_parent(Vec2 local) const { return position() + right() * local.x + forward() * local.y; }
};

/// Mounting layout shared by ego and target vehicles.
struct VehicleGeometry {
  double rx_separation = 1.6;  ///< L, metres between QRX 1 and QRX 2
  double tx_separation = 1.6;  ///< D, metres between the two lights
  double body_length = 5.0;

  void validate() const;
};

enum class LightMount { Tail, Head };

/// TX positions expressed in the ego receiver frame: origin at QRX 1, +x towards QRX 2,
/// +y along the ego heading.
struct RelativeTargetState {
  Vec2 p1;
  Vec2 p2;
  double facing1 = 0.0;  ///< emission boresight of TX 1, ego frame
  double facing2 = 0.0;

  Vec2 tx(int index) const { return index == 1 ? p1 : p2; }
  double facing(int index) const { return index == 1 ? facing1 : facing2; }
};

/// Ego receiver frame position of QRX `rx_index` (1 or 2).
inline Vec2 rx_position(int rx_index, double rx_separation) {
  return rx_index == 1 ? Vec2{0.0, 0.0} : Vec2{rx_separation, 0.0};
}

/// World poses to ego-frame TX positions. The target's lights sit on its rear (tail) or front
/// (head) bumper corners, TX 1 being the corner that lines up with QRX 1 when both vehicles
/// drive in the same direction (tail) or face each other (head).
RelativeTargetState relative_tx_positions(const VehiclePose& ego, const VehiclePose& target,
                                          const VehicleGeometry& geom,
                                          LightMount mount = LightMount::Tail);

/// Bearing of a TX at ego-frame position `p` seen from QRX `rx_index`, measured from the
/// receiver boresight (+y), positive towards +x. Throws BehindBaseline when p.y <= 0.
double true_aoa(Vec2 p, int rx_index, double rx_separation);

/// Angle between the TX boresight and the TX->RX ray.
double emission_angle(double tx_facing, Vec2 tx_pos, Vec2 rx_pos);

/// Angle between the RX boresight (+y) and the RX->TX ray.
double incidence_angle(Vec2 tx_pos, Vec2 rx_pos);

/// True iff the RX is inside the TX emission cone and the TX is inside the RX field of view.
/// Both angles are half-angles.
bool link_visible(double tx_facing, Vec2 tx_pos, Vec2 rx_pos, double emission_half_angle,
                  double rx_fov);

}  // namespace vlcloc
