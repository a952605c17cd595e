#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vlcloc/core.hpp"
#include "vlcloc/engine.hpp"

namespace vlcloc {

/// Standard deviation of AoA noise per observation, ordered
/// (theta_11, theta_12, theta_21, theta_22) = (QRX1/TX1, QRX1/TX2, QRX2/TX1, QRX2/TX2).
struct AoANoiseModel {
  std::array<double, 4> sigma{};

  static AoANoiseModel uniform(double s) { return {{s, s, s, s}}; }
  /// sigma for QRX `rx` (1, 2) and TX `tx` (1, 2).
  double at(int rx, int tx) const { return sigma[static_cast<std::size_t>(2 * (rx - 1) + (tx - 1))]; }
  double rms() const;
};

/// Parameters ordered (x1, y1, x2, y2).
struct CrlbResult {
  Eigen::Matrix4d fim;
  std::array<double, 4> variances{};
  std::array<double, 2> position_bounds{};  ///< per TX, sqrt(var_x + var_y)
};

/// Fisher information of the dual-AoA observation model; block-diagonal per TX.
/// Throws SingularFim if any row is identically zero, InvalidParams for sigma <= 0.
Eigen::Matrix4d fim(Vec2 p1, Vec2 p2, double rx_separation, const AoANoiseModel& noise);

/// Diagonal of the inverse FIM. Throws SingularFim when the condition number exceeds 1e12
/// and InvalidParams when the matrix is not symmetric PSD.
CrlbResult crlb(const Eigen::Matrix4d& fim);

/// Raw AoA estimates of the four channels over repeated static cycles.
struct AoaSamples {
  std::array<std::vector<double>, 4> theta;  ///< valid measurements only
  std::array<double, 4> truth{};
  std::size_t trials = 0;
};

AoaSamples collect_aoa_samples(const Simulator& sim, const VehiclePose& ego,
                               const VehiclePose& target, std::size_t h_buf,
                               std::size_t n_trials, std::uint64_t seed);

/// Sample standard deviation of theta_hat per channel over n_trials full pipeline runs.
/// Throws InsufficientTrials for n_trials < 100.
AoANoiseModel estimate_aoa_sigma(const Simulator& sim, const VehiclePose& ego,
                                 const VehiclePose& target, std::size_t h_buf,
                                 std::size_t n_trials, std::uint64_t seed);

/// First-order propagation of the quadrant noise through the correlation estimate, the
/// power ratio and the local slope of f_qrx. Links that are down get +infinity.
AoANoiseModel analytic_aoa_sigma(const Simulator& sim, const VehiclePose& ego,
                                 const VehiclePose& target, std::size_t h_buf);

}  // namespace vlcloc
