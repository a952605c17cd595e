#pragma once

#include <vector>

#include "vlcloc/config_io.hpp"
#include "vlcloc/output.hpp"

namespace vlcloc {

/// Static target, parallel to the ego, tail lights placed so that TX1 sits at p1 relative to
/// QRX1.
StaticLocation location_for_tx1(Vec2 p1, const VehicleGeometry& geometry);

/// Position bounds over the configured grid. Geometries where a link is down (analytic sigma)
/// or the FIM is singular get NaN bounds.
std::vector<CrlbMapRow> crlb_map(const SystemConfig& system, const CrlbMapConfig& map,
                                 double rate_hz);

/// f_QRX sampled uniformly over [-90, 90] deg; NaN where no light reaches the QPD.
std::vector<QrxCurvePoint> qrx_design_curve(const QrxOpticalConfig& optics, std::size_t points);

}  // namespace vlcloc
