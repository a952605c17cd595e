#include "vlcloc/optics.hpp"

#include <algorithm>
#include <cmath>

#include "vlcloc/core.hpp"
#include "vlcloc/error.hpp"

namespace vlcloc {

namespace {

// Antiderivative of sqrt(r^2 - x^2).
double circle_primitive(double x, double r) {
  const double s = std::sqrt(std::max(0.0, r * r - x * x));
  return 0.5 * (x * s + r * r * std::asin(std::clamp(x / r, -1.0, 1.0)));
}

}  // namespace

void QrxOpticalConfig::validate() const {
  if (!(lens_diameter_mm > 0.0) || !(refractive_index > 0.0) || !(qpd_side_mm > 0.0) ||
      !(lens_qpd_distance_mm > 0.0) || dead_gap_mm < 0.0 || dead_gap_mm >= qpd_side_mm) {
    throw Error(ErrorCode::InvalidParams, "QRX optical dimensions must be positive");
  }
  spot_diameter(*this);
}

bool QrxOpticalConfig::satisfies_bijection_guard() const {
  return spot_diameter(*this) < qpd_side_mm * std::sqrt(2.0);
}

double spot_diameter(const QrxOpticalConfig& cfg) {
  const double ds = cfg.lens_diameter_mm - cfg.refractive_index * cfg.lens_qpd_distance_mm;
  if (!(ds > 0.0)) {
    throw Error(ErrorCode::NonPositiveSpot, "lens-QPD distance too large for the lens");
  }
  return ds;
}

double spot_displacement(double lens_qpd_distance_mm, double theta) {
  return lens_qpd_distance_mm * std::tan(theta);
}

double fov(const QrxOpticalConfig& cfg) {
  return std::atan(spot_diameter(cfg) / (2.0 * cfg.lens_qpd_distance_mm));
}

double disk_rect_overlap(double cx, double cy, double r, double x0, double x1, double y0,
                         double y1) {
  // Shift to disk-centred coordinates and clip the x-range to the disk.
  x0 = std::max(x0 - cx, -r);
  x1 = std::min(x1 - cx, r);
  y0 -= cy;
  y1 -= cy;
  if (x0 >= x1 || y0 >= y1) return 0.0;

  // Split [x0, x1] where the circle crosses y0 or y1; on each piece the upper and lower
  // bounds are each either a constant or +/- sqrt(r^2 - x^2).
  std::array<double, 6> cuts{};
  std::size_t n = 0;
  cuts[n++] = x0;
  for (double y : {y0, y1}) {
    if (std::abs(y) < r) {
      const double xc = std::sqrt(r * r - y * y);
      for (double c : {-xc, xc}) {
        if (c > x0 && c < x1) cuts[n++] = c;
      }
    }
  }
  cuts[n++] = x1;
  std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(n));

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (b <= a) continue;
    const double m = 0.5 * (a + b);
    const double s = std::sqrt(std::max(0.0, r * r - m * m));
    const bool top_is_circle = s < y1;
    const bool bottom_is_circle = -s > y0;
    const double top = top_is_circle ? s : y1;
    const double bottom = bottom_is_circle ? -s : y0;
    if (top <= bottom) continue;
    const double arc = circle_primitive(b, r) - circle_primitive(a, r);
    const double width = b - a;
    area += (top_is_circle ? arc : y1 * width) - (bottom_is_circle ? -arc : y0 * width);
  }
  return area;
}

QuadrantFractions quadrant_fractions(double theta, const QrxOpticalConfig& cfg) {
  const double r = 0.5 * spot_diameter(cfg);
  const double dt = spot_displacement(cfg.lens_qpd_distance_mm, theta);
  const double h = 0.5 * cfg.qpd_side_mm;
  const double g = 0.5 * cfg.dead_gap_mm;
  const double disk = kPi * r * r;

  auto part = [&](double x0, double x1, double y0, double y1) {
    return disk_rect_overlap(dt, 0.0, r, x0, x1, y0, y1) / disk;
  };
  QuadrantFractions f;
  f.a = part(-h, -g, g, h);
  f.b = part(g, h, g, h);
  f.c = part(-h, -g, -h, -g);
  f.d = part(g, h, -h, -g);
  return f;
}

double phi_from_quadrants(const std::array<double, 4>& p) {
  const double total = p[0] + p[1] + p[2] + p[3];
  if (total == 0.0) {
    throw Error(ErrorCode::ZeroIllumination, "no power on any quadrant");
  }
  return ((p[1] + p[3]) - (p[0] + p[2])) / total;
}

double f_qrx(double theta, const QrxOpticalConfig& cfg) {
  return phi_from_quadrants(quadrant_fractions(theta, cfg).as_array());
}

GqrxTable::GqrxTable(std::vector<double> phi_grid, std::vector<double> theta_grid,
                     double theta_fov)
    : phi_(std::move(phi_grid)), theta_(std::move(theta_grid)), theta_fov_(theta_fov) {
  if (phi_.size() != theta_.size() || phi_.size() < 2) {
    throw Error(ErrorCode::InvalidParams, "g_QRX table needs matching grids of >= 2 points");
  }
  for (std::size_t i = 1; i < phi_.size(); ++i) {
    if (!(phi_[i] > phi_[i - 1])) {
      throw Error(ErrorCode::BijectionViolated, "Phi grid is not strictly increasing");
    }
  }
}

double GqrxTable::lookup(double phi) const {
  if (phi <= phi_.front()) return theta_.front();
  if (phi >= phi_.back()) return theta_.back();
  const auto it = std::upper_bound(phi_.begin(), phi_.end(), phi);
  const std::size_t i = static_cast<std::size_t>(it - phi_.begin());
  const double t = (phi - phi_[i - 1]) / (phi_[i] - phi_[i - 1]);
  return theta_[i - 1] + t * (theta_[i] - theta_[i - 1]);
}

GqrxTable build_g_qrx(const QrxOpticalConfig& cfg, std::size_t n_points) {
  cfg.validate();
  if (n_points < 2) {
    throw Error(ErrorCode::InvalidParams, "g_QRX table needs at least 2 points");
  }
  if (!cfg.satisfies_bijection_guard()) {
    throw Error(ErrorCode::BijectionViolated, "spot diameter exceeds d_H * sqrt(2)");
  }
  const double theta_fov = fov(cfg);
  std::vector<double> theta(n_points);
  std::vector<double> phi(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    theta[i] = -theta_fov + 2.0 * theta_fov * static_cast<double>(i) /
                                static_cast<double>(n_points - 1);
    phi[i] = f_qrx(theta[i], cfg);
  }
  // Saturated ends are exact by construction; pin them so lookups cover [-1, 1].
  phi.front() = -1.0;
  phi.back() = 1.0;
  return GqrxTable(std::move(phi), std::move(theta), theta_fov);
}

}  // namespace vlcloc
