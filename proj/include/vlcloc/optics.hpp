#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace vlcloc {

/// Lens / quadrant-photodiode layout of a QRX. Lengths in millimetres.
struct QrxOpticalConfig {
  double lens_diameter_mm = 7.1;       ///< d_L
  double refractive_index = 1.5;       ///< n
  double qpd_side_mm = 6.3;            ///< d_H, full side of the four-quadrant square
  double lens_qpd_distance_mm = 0.55;  ///< d_X
  double dead_gap_mm = 0.0;            ///< insensitive cross between quadrants

  /// Throws InvalidParams for non-positive dimensions, NonPositiveSpot when d_S <= 0.
  void validate() const;
  /// True when d_S < d_H * sqrt(2).
  bool satisfies_bijection_guard() const;
};

/// Share of the collected spot power landing on each quadrant. A/C are the left
/// (negative-x) quadrants, B/D the right ones; A/B on top.
struct QuadrantFractions {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double sum() const { return a + b + c + d; }
  std::array<double, 4> as_array() const { return {a, b, c, d}; }
};

/// Spot FWHM d_S = d_L - n * d_X. Throws NonPositiveSpot if the result is not positive.
double spot_diameter(const QrxOpticalConfig& cfg);

/// Spot centre offset from the QPD centre, d_T = d_X * tan(theta).
double spot_displacement(double lens_qpd_distance_mm, double theta);

/// Field of view half-angle arctan(d_S / (2 d_X)).
double fov(const QrxOpticalConfig& cfg);

/// Area of the intersection between a disk (centre (cx, cy), radius r) and the
/// axis-aligned rectangle [x0, x1] x [y0, y1].
double disk_rect_overlap(double cx, double cy, double r, double x0, double x1, double y0,
                         double y1);

/// Flat-top spot of diameter d_S shifted by d_T along +x, intersected with each quadrant.
QuadrantFractions quadrant_fractions(double theta, const QrxOpticalConfig& cfg);

/// Horizontal power-ratio map Phi = ((B + D) - (A + C)) / (A + B + C + D).
/// Throws ZeroIllumination when the spot misses the QPD.
double phi_from_quadrants(const std::array<double, 4>& power);
double f_qrx(double theta, const QrxOpticalConfig& cfg);

/// Tabulated inverse of f_qrx on (-theta_FoV, theta_FoV), strictly increasing in Phi.
class GqrxTable {
 public:
  static constexpr std::size_t kDefaultPoints = 2048;

  GqrxTable(std::vector<double> phi_grid, std::vector<double> theta_grid, double theta_fov);

  /// Linear interpolation of theta at `phi`; clamps to the table ends outside [-1, 1].
  double lookup(double phi) const;

  std::span<const double> phi_grid() const { return phi_; }
  std::span<const double> theta_grid() const { return theta_; }
  double theta_fov() const { return theta_fov_; }
  std::size_t size() const { return phi_.size(); }

 private:
  std::vector<double> phi_;
  std::vector<double> theta_;
  double theta_fov_;
};

/// Samples f_qrx uniformly in theta over [-theta_FoV, theta_FoV]. Throws BijectionViolated
/// when the guard fails or the sampled Phi is not strictly increasing.
GqrxTable build_g_qrx(const QrxOpticalConfig& cfg,
                      std::size_t n_points = GqrxTable::kDefaultPoints);

}  // namespace vlcloc
