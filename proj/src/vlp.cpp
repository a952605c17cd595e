#include "vlcloc/vlp.hpp"

#include <cmath>

#include "vlcloc/error.hpp"

namespace vlcloc {

Vec2 triangulate(double theta1, double theta2, double rx_separation) {
  const double s = std::sin(theta1 - theta2);
  if (std::abs(s) < kDegenerateSine) {
    throw Error(ErrorCode::DegenerateGeometry, "bearings are parallel");
  }
  const double c1 = std::cos(theta1);
  const Vec2 p{rx_separation * (1.0 + std::sin(theta2) * c1 / s),
               rx_separation * (std::cos(theta2) * c1 / s)};
  if (!(p.y > 0.0)) {
    throw Error(ErrorCode::NegativeRange, "bearings intersect behind the receivers");
  }
  return p;
}

LocalizationError localization_error(const RelativeTargetState& truth,
                                     const PositionEstimate& est) {
  if (!est.valid()) throw Error(ErrorCode::Unavailable, "estimate is not valid");
  LocalizationError e;
  e.e1 = (truth.p1 - est.p1).norm();
  e.e2 = (truth.p2 - est.p2).norm();
  e.norm = std::hypot(e.e1, e.e2);
  return e;
}

}  // namespace vlcloc
