#include <cmath>
#include <random>

#include "doctest.h"
#include "vlcloc/crlb.hpp"
#include "vlcloc/crlb_map.hpp"
#include "vlcloc/engine.hpp"
#include "vlcloc/error.hpp"

using namespace vlcloc;

namespace {
Eigen::Matrix4d fd_fim(Vec2 p1, Vec2 p2, double L, const AoANoiseModel& noise) {
  const double h = 1e-6;
  Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
  for (int rx = 1; rx <= 2; ++rx) {
    for (int j = 1; j <= 2; ++j) {
      const int row = 2 * (rx - 1) + (j - 1);
      const Vec2 p = j == 1 ? p1 : p2;
      jac(row, 2 * (j - 1)) =
          (true_aoa(p + Vec2{h, 0}, rx, L) - true_aoa(p - Vec2{h, 0}, rx, L)) / (2 * h);
      jac(row, 2 * (j - 1) + 1) =
          (true_aoa(p + Vec2{0, h}, rx, L) - true_aoa(p - Vec2{0, h}, rx, L)) / (2 * h);
    }
  }
  Eigen::Vector4d w;
  for (int rx = 1; rx <= 2; ++rx)
    for (int j = 1; j <= 2; ++j) w(2 * (rx - 1) + (j - 1)) = 1.0 / std::pow(noise.at(rx, j), 2);
  return jac.transpose() * w.asDiagonal() * jac;
}

SystemConfig quiet_night() {
  SystemConfig cfg;
  cfg.channel = ChannelCondition::make(Ambient::Night, Weather::Clear);
  return cfg;
}
}  // namespace

TEST_CASE("Fisher information at the reference geometry") {
  const auto noise = AoANoiseModel::uniform(1e-3);
  const Eigen::Matrix4d f = fim({0.8, 5.0}, {2.4, 5.0}, 1.6, noise);
  CHECK(f(0, 0) == doctest::Approx(7.606e4).epsilon(1e-3));
  CHECK(f(1, 1) == doctest::Approx(1.947e3).epsilon(1e-3));
  CHECK(std::abs(f(0, 1)) < 1e-9 * f(0, 0));
  for (int a : {0, 1})
    for (int b : {2, 3}) {
      CHECK(f(a, b) == 0.0);
      CHECK(f(b, a) == 0.0);
    }

  const auto r = crlb(f);
  CHECK(std::sqrt(r.variances[0]) == doctest::Approx(3.63e-3).epsilon(2e-3));
  CHECK(std::sqrt(r.variances[1]) == doctest::Approx(22.66e-3).epsilon(2e-3));
  CHECK(r.position_bounds[0] == doctest::Approx(2.295e-2).epsilon(2e-3));

  const auto scaled = crlb(fim({0.8, 5.0}, {2.4, 5.0}, 1.6, AoANoiseModel::uniform(3e-3)));
  CHECK(scaled.position_bounds[0] == doctest::Approx(3.0 * r.position_bounds[0]));
  CHECK(scaled.position_bounds[1] == doctest::Approx(3.0 * r.position_bounds[1]));
}

TEST_CASE("Fisher information matches finite differences") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ux(-4.0, 4.0), uy(1.0, 15.0), us(2e-4, 5e-3);
  for (int i = 0; i < 100; ++i) {
    const Vec2 p1{ux(rng), uy(rng)};
    const Vec2 p2 = p1 + Vec2{1.6, 0.0};
    const AoANoiseModel noise{{us(rng), us(rng), us(rng), us(rng)}};
    const Eigen::Matrix4d a = fim(p1, p2, 1.6, noise);
    const Eigen::Matrix4d b = fd_fim(p1, p2, 1.6, noise);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-6 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("FIM and CRLB error paths") {
  CHECK_THROWS_AS((void)fim({0, 5}, {1.6, 5}, 1.6, AoANoiseModel::uniform(0.0)), Error);
  try {
    (void)crlb(Eigen::Matrix4d::Zero());
    FAIL("expected SingularFim");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularFim);
  }
  Eigen::Matrix4d asym = Eigen::Matrix4d::Identity();
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS((void)crlb(asym), Error);
}

TEST_CASE("Monte Carlo AoA noise") {
  const auto loc = location_for_tx1({0.8, 5.0}, VehicleGeometry{});
  const std::size_t h = 600;

  SUBCASE("noise off gives zero spread") {
    SystemConfig cfg = quiet_night();
    cfg.noise = NoiseMode::Off;
    const Simulator sim(cfg);
    const auto s = estimate_aoa_sigma(sim, loc.ego, loc.target, h, 100, 1);
    for (double v : s.sigma) CHECK(v < 1e-12);
  }
  SUBCASE("more transmit power, less spread") {
    const auto far = location_for_tx1({0.8, 9.0}, VehicleGeometry{});
    SystemConfig dim = quiet_night();
    SystemConfig bright = dim;
    bright.tx1.optical_power_w *= 2.0;
    bright.tx2.optical_power_w *= 2.0;
    const auto a = estimate_aoa_sigma(Simulator(dim), far.ego, far.target, h, 2000, 5);
    const auto b = estimate_aoa_sigma(Simulator(bright), far.ego, far.target, h, 2000, 5);
    CHECK(b.rms() < a.rms());
  }
  SUBCASE("reproducible across seeds") {
    SystemConfig day = quiet_night();
    day.channel = ChannelCondition::make(Ambient::DayIndirect, Weather::Clear);
    const auto ahead = location_for_tx1({0.0, 5.0}, VehicleGeometry{});
    const Simulator sim(day);
    const auto a = estimate_aoa_sigma(sim, ahead.ego, ahead.target, h, 10000, 100);
    const auto b = estimate_aoa_sigma(sim, ahead.ego, ahead.target, h, 10000, 200);
    for (int k = 0; k < 4; ++k) CHECK(b.sigma[k] == doctest::Approx(a.sigma[k]).epsilon(0.1));
  }
  SUBCASE("analytic propagation agrees with Monte Carlo") {
    const Simulator sim(quiet_night());
    const auto mc = estimate_aoa_sigma(sim, loc.ego, loc.target, h, 4000, 9);
    const auto an = analytic_aoa_sigma(sim, loc.ego, loc.target, h);
    for (int k = 0; k < 4; ++k) CHECK(mc.sigma[k] == doctest::Approx(an.sigma[k]).epsilon(0.1));
  }
  SUBCASE("too few trials") {
    const Simulator sim(quiet_night());
    try {
      (void)estimate_aoa_sigma(sim, loc.ego, loc.target, h, 50, 1);
      FAIL("expected InsufficientTrials");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InsufficientTrials);
    }
  }
}

TEST_CASE("CRLB map grid") {
  CrlbMapConfig map;
  map.x_min_m = -1.0;
  map.x_max_m = 1.0;
  map.y_min_m = 2.0;
  map.y_max_m = 4.0;
  map.step_m = 1.0;
  map.sigma_source = "fixed";
  const auto rows = crlb_map(quiet_night(), map, 50.0);
  CHECK(rows.size() == 9);
  for (const auto& r : rows) {
    CHECK(r.sigma_used == doctest::Approx(1e-3));
    CHECK(std::isfinite(r.bound_p1_m));
  }
  const auto loc = location_for_tx1({0.3, 4.0}, VehicleGeometry{});
  const auto s = relative_tx_positions(loc.ego, loc.target, VehicleGeometry{});
  CHECK(s.p1.x == doctest::Approx(0.3));
  CHECK(s.p1.y == doctest::Approx(4.0));
}
