#include "vlcloc/crlb_map.hpp"

#include <cmath>
#include <limits>

#include "vlcloc/crlb.hpp"
#include "vlcloc/error.hpp"
#include "vlcloc/rng.hpp"

namespace vlcloc {

StaticLocation location_for_tx1(Vec2 p1, const VehicleGeometry& g) {
  StaticLocation loc;
  loc.ego = VehiclePose(0.0, 0.0, 0.0);
  const double cx = -0.5 * g.rx_separation + p1.x + 0.5 * g.tx_separation;
  const double cy = 0.5 * g.body_length + p1.y + 0.5 * g.body_length;
  loc.target = VehiclePose(cx, cy, 0.0);
  loc.x_m = cx;
  loc.y_m = p1.y;
  return loc;
}

std::vector<CrlbMapRow> crlb_map(const SystemConfig& system, const CrlbMapConfig& map,
                                 double rate_hz) {
  if (!(map.step_m > 0.0) || map.x_max_m < map.x_min_m || map.y_max_m < map.y_min_m) {
    throw Error(ErrorCode::InvalidParams, "crlb map grid is empty or inverted");
  }
  const bool analytic = map.sigma_source == "analytic";
  if (!analytic && !(map.sigma_rad > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "fixed sigma must be positive");
  }
  const Simulator sim(system);
  const std::size_t h_buf = sim.buffer_length(rate_hz);
  const auto nx = static_cast<std::size_t>(std::floor((map.x_max_m - map.x_min_m) / map.step_m + 1e-9)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((map.y_max_m - map.y_min_m) / map.step_m + 1e-9)) + 1;
  const double l = system.vehicle.rx_separation;
  const double d = system.vehicle.tx_separation;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<CrlbMapRow> rows(nx * ny);
  parallel_for(rows.size(), [&](std::size_t idx) {
    CrlbMapRow& row = rows[idx];
    row.x = map.x_min_m + map.step_m * static_cast<double>(idx % nx);
    row.y = map.y_min_m + map.step_m * static_cast<double>(idx / nx);
    row.sigma_used = row.bound_p1_m = row.bound_p2_m = nan;
    if (row.y <= 0.0) return;
    const Vec2 p1{row.x, row.y};
    const Vec2 p2{row.x + d, row.y};
    AoANoiseModel noise = AoANoiseModel::uniform(map.sigma_rad);
    if (analytic) {
      const StaticLocation loc = location_for_tx1(p1, system.vehicle);
      noise = analytic_aoa_sigma(sim, loc.ego, loc.target, h_buf);
    }
    row.sigma_used = noise.rms();
    for (double s : noise.sigma)
      if (!std::isfinite(s)) return;
    try {
      const CrlbResult r = crlb(fim(p1, p2, l, noise));
      row.bound_p1_m = r.position_bounds[0];
      row.bound_p2_m = r.position_bounds[1];
    } catch (const Error&) {
    }
  });
  return rows;
}

std::vector<QrxCurvePoint> qrx_design_curve(const QrxOpticalConfig& optics, std::size_t points) {
  if (points < 2) throw Error(ErrorCode::InvalidParams, "need at least two curve points");
  std::vector<QrxCurvePoint> curve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double deg = -90.0 + 180.0 * static_cast<double>(k) / static_cast<double>(points - 1);
    curve[k].theta_deg = deg;
    try {
      curve[k].phi = f_qrx(deg2rad(deg), optics);
    } catch (const Error&) {
      curve[k].phi = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return curve;
}

}  // namespace vlcloc
