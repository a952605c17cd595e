#pragma once

#include "vlcloc/core.hpp"

namespace vlcloc {

/// |sin(theta1 - theta2)| below this is treated as parallel bearings.
inline constexpr double kDegenerateSine = 1e-6;

/// Position of a TX from its bearings at QRX 1 and QRX 2 (law of sines).
/// Throws DegenerateGeometry for near-parallel bearings and NegativeRange when y <= 0.
Vec2 triangulate(double theta1, double theta2, double rx_separation);

struct PositionEstimate {
  Vec2 p1;
  Vec2 p2;
  bool valid1 = false;
  bool valid2 = false;
  double timestamp = 0.0;

  bool valid() const { return valid1 && valid2; }
};

struct LocalizationError {
  double e1 = 0.0;
  double e2 = 0.0;
  double norm = 0.0;
};

/// Per-TX Euclidean errors and their joint norm. Throws Unavailable for an invalid estimate.
LocalizationError localization_error(const RelativeTargetState& truth, const PositionEstimate& est);

}  // namespace vlcloc
