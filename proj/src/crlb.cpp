#include "vlcloc/crlb.hpp"

#include <cmath>
#include <limits>

#include "vlcloc/error.hpp"
#include "vlcloc/rng.hpp"

namespace vlcloc {

double AoANoiseModel::rms() const {
  double acc = 0.0;
  for (double s : sigma) acc += s * s;
  return std::sqrt(acc / 4.0);
}

Eigen::Matrix4d fim(Vec2 p1, Vec2 p2, double rx_separation, const AoANoiseModel& noise) {
  for (double s : noise.sigma) {
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidParams, "AoA sigma must be positive");
  }
  if (!(p1.y > 0.0) || !(p2.y > 0.0)) {
    throw Error(ErrorCode::BehindBaseline, "TX positions must lie ahead of the baseline");
  }
  // Rows of the observation Jacobian: d theta_ij / d (x1, y1, x2, y2).
  Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
  Eigen::Vector4d weight;
  const std::array<Vec2, 2> tx{p1, p2};
  for (int rx = 1; rx <= 2; ++rx) {
    for (int j = 1; j <= 2; ++j) {
      const int row = 2 * (rx - 1) + (j - 1);
      const Vec2 p = tx[static_cast<std::size_t>(j - 1)];
      const double dx = rx == 1 ? p.x : p.x - rx_separation;
      const double r2 = dx * dx + p.y * p.y;
      jac(row, 2 * (j - 1)) = p.y / r2;
      jac(row, 2 * (j - 1) + 1) = -dx / r2;
      const double s = noise.at(rx, j);
      weight(row) = 1.0 / (s * s);
    }
  }
  const Eigen::Matrix4d f = jac.transpose() * weight.asDiagonal() * jac;
  for (int r = 0; r < 4; ++r) {
    if (f.row(r).isZero(0.0)) throw Error(ErrorCode::SingularFim, "FIM has an all-zero row");
  }
  return f;
}

CrlbResult crlb(const Eigen::Matrix4d& f) {
  const double scale = f.cwiseAbs().maxCoeff();
  if ((f - f.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidParams, "FIM is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(f);
  const auto ev = eig.eigenvalues();
  if (ev.minCoeff() < -1e-9 * f.trace()) {
    throw Error(ErrorCode::InvalidParams, "FIM is not positive semi-definite");
  }
  if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() / ev.minCoeff() > 1e12) {
    throw Error(ErrorCode::SingularFim, "FIM condition number exceeds 1e12");
  }
  CrlbResult r;
  r.fim = f;
  const Eigen::Matrix4d inv = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() *
                              eig.eigenvectors().transpose();
  for (int i = 0; i < 4; ++i) r.variances[static_cast<std::size_t>(i)] = inv(i, i);
  r.position_bounds[0] = std::sqrt(r.variances[0] + r.variances[1]);
  r.position_bounds[1] = std::sqrt(r.variances[2] + r.variances[3]);
  return r;
}

AoaSamples collect_aoa_samples(const Simulator& sim, const VehiclePose& ego,
                               const VehiclePose& target, std::size_t h_buf,
                               std::size_t n_trials, std::uint64_t seed) {
  std::vector<CycleRecord> recs(n_trials);
  parallel_for(n_trials, [&](std::size_t k) {
    recs[k] = sim.simulate_static(ego, target, h_buf, trial_seed(seed, k));
  });
  AoaSamples out;
  out.trials = n_trials;
  for (const auto& r : recs) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const auto& m = r.aoa[i][j];
        if (m.valid) out.theta[static_cast<std::size_t>(2 * i + j)].push_back(m.theta_hat);
      }
  }
  if (!recs.empty()) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.truth[static_cast<std::size_t>(2 * i + j)] = recs[0].true_aoa[i][j];
  }
  return out;
}

AoANoiseModel estimate_aoa_sigma(const Simulator& sim, const VehiclePose& ego,
                                 const VehiclePose& target, std::size_t h_buf,
                                 std::size_t n_trials, std::uint64_t seed) {
  if (n_trials < 100) {
    throw Error(ErrorCode::InsufficientTrials, "need at least 100 trials");
  }
  const AoaSamples samples = collect_aoa_samples(sim, ego, target, h_buf, n_trials, seed);
  AoANoiseModel model;
  for (std::size_t c = 0; c < 4; ++c) {
    const auto& v = samples.theta[c];
    if (v.size() < 2) throw Error(ErrorCode::Unavailable, "too few valid AoA measurements");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    model.sigma[c] = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return model;
}

AoANoiseModel analytic_aoa_sigma(const Simulator& sim, const VehiclePose& ego,
                                 const VehiclePose& target, std::size_t h_buf) {
  const SystemConfig& cfg = sim.config();
  const RelativeTargetState s = sim.relative_state(ego, target);
  AoANoiseModel out;
  for (int rx = 1; rx <= 2; ++rx) {
    std::array<LinkGain, 2> gains{};
    std::array<QuadrantFractions, 2> fr{};
    std::array<bool, 2> up{};
    std::array<double, 4> quadrant_power{};
    for (int j = 1; j <= 2; ++j) {
      const LinkGeometry g = sim.link_geometry(s, rx, j);
      up[j - 1] = link_visible(g.tx_facing, g.tx_pos, g.rx_pos, g.emission_half_angle, g.rx_fov);
      if (!up[j - 1]) continue;
      gains[j - 1] = link_gain(sim.tx(j), cfg.aperture_area_m2, g, cfg.channel);
      fr[j - 1] = quadrant_fractions(gains[j - 1].incidence_aoa, cfg.optics);
      const auto f = fr[j - 1].as_array();
      for (int q = 0; q < 4; ++q) quadrant_power[q] += f[q] * gains[j - 1].received_power_w;
    }
    std::array<double, 4> var_q{};
    for (int q = 0; q < 4; ++q) {
      // eps_q = mean(Q s_hat): noise variance sigma_q^2 * mean(s_hat^2) / h, mean(s_hat^2) = 1/2.
      var_q[q] = quadrant_noise_variance(quadrant_power[q], cfg.tia, cfg.channel) * 0.5 /
                 static_cast<double>(h_buf);
    }
    for (int j = 1; j <= 2; ++j) {
      double& sigma = out.sigma[static_cast<std::size_t>(2 * (rx - 1) + (j - 1))];
      if (!up[j - 1]) {
        sigma = std::numeric_limits<double>::infinity();
        continue;
      }
      const double current = cfg.tia.responsivity_a_per_w * gains[j - 1].received_power_w;
      const auto f = fr[j - 1].as_array();
      std::array<double, 4> eps{};
      for (int q = 0; q < 4; ++q) eps[q] = 0.5 * current * f[q];
      const double total = eps[0] + eps[1] + eps[2] + eps[3];
      const double phi = phi_from_quadrants(eps);
      const std::array<double, 4> sign{-1.0, 1.0, -1.0, 1.0};
      double var_phi = 0.0;
      for (int q = 0; q < 4; ++q) {
        const double d = (sign[q] - phi) / total;
        var_phi += d * d * var_q[q];
      }
      const double theta = gains[j - 1].incidence_aoa;
      const double step = 1e-5;
      const double slope = (f_qrx(theta + step, cfg.optics) - f_qrx(theta - step, cfg.optics)) /
                           (2.0 * step);
      sigma = std::sqrt(var_phi) / std::abs(slope);
    }
  }
  return out;
}

}  // namespace vlcloc
