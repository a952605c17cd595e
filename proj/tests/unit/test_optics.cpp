#include <cmath>
#include <random>

#include "doctest.h"
#include "vlcloc/core.hpp"
#include "vlcloc/error.hpp"
#include "vlcloc/optics.hpp"

using namespace vlcloc;

namespace {
ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception thrown");
  return ErrorCode::InvalidParams;
}
}  // namespace

TEST_CASE("spot diameter and displacement") {
  QrxOpticalConfig cfg;
  CHECK(spot_diameter(cfg) == doctest::Approx(6.275));

  QrxOpticalConfig flat = cfg;
  flat.lens_qpd_distance_mm = 0.0;
  CHECK(spot_diameter(flat) == doctest::Approx(cfg.lens_diameter_mm));
  CHECK(code_of([&] { flat.validate(); }) == ErrorCode::InvalidParams);

  QrxOpticalConfig far = cfg;
  far.lens_qpd_distance_mm = 4.74;
  CHECK(code_of([&] { (void)spot_diameter(far); }) == ErrorCode::NonPositiveSpot);

  CHECK(spot_displacement(0.55, 0.0) == 0.0);
  CHECK(spot_displacement(0.55, kPi / 4) == doctest::Approx(0.55));
  CHECK(spot_displacement(0.55, deg2rad(80.06)) == doctest::Approx(3.1375).epsilon(1e-3));
}

TEST_CASE("field of view") {
  QrxOpticalConfig cfg;
  CHECK(rad2deg(fov(cfg)) == doctest::Approx(80.0566).epsilon(1e-5));
  double prev = fov(cfg);
  for (double dx : {0.6, 0.8, 1.0, 2.0}) {
    QrxOpticalConfig c = cfg;
    c.lens_qpd_distance_mm = dx;
    CHECK(fov(c) < prev);
    prev = fov(c);
  }
  QrxOpticalConfig rule = cfg;
  rule.lens_qpd_distance_mm = (cfg.lens_diameter_mm - cfg.qpd_side_mm) / cfg.refractive_index;
  CHECK(rule.lens_qpd_distance_mm == doctest::Approx(0.5333).epsilon(1e-3));
  CHECK(spot_diameter(rule) == doctest::Approx(cfg.qpd_side_mm));
}

TEST_CASE("disk-rectangle overlap") {
  CHECK(disk_rect_overlap(0, 0, 1, -5, 5, -5, 5) == doctest::Approx(kPi));
  CHECK(disk_rect_overlap(0, 0, 1, 0, 5, 0, 5) == doctest::Approx(kPi / 4));
  CHECK(disk_rect_overlap(0, 0, 1, 2, 3, 2, 3) == doctest::Approx(0.0));
  CHECK(disk_rect_overlap(0, 0, 1, 0, 5, -5, 5) == doctest::Approx(kPi / 2));
}

TEST_CASE("quadrant fractions") {
  QrxOpticalConfig cfg;
  SUBCASE("on-axis symmetry") {
    const auto f = quadrant_fractions(0.0, cfg);
    CHECK(f.a == doctest::Approx(f.b));
    CHECK(f.a == doctest::Approx(f.c));
    CHECK(f.a == doctest::Approx(f.d));
    CHECK(f.sum() <= 1.0 + 1e-12);
  }
  SUBCASE("edge of the field of view") {
    const auto f = quadrant_fractions(fov(cfg), cfg);
    CHECK(f.a == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f.c == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f.b > 0.0);
  }
  SUBCASE("Monte Carlo disk sampling at 30 deg") {
    const double theta = deg2rad(30.0);
    const double r = 0.5 * spot_diameter(cfg);
    const double cx = cfg.lens_qpd_distance_mm * std::tan(theta);
    const double h = 0.5 * cfg.qpd_side_mm;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, 4> hits{};
    std::size_t inside = 0;
    const std::size_t n = 2'000'000;
    while (inside < n) {
      const double px = u(rng), py = u(rng);
      if (px * px + py * py > 1.0) continue;
      ++inside;
      const double x = cx + r * px, y = r * py;
      if (std::abs(x) > h || std::abs(y) > h) continue;
      const bool right = x > 0.0, top = y > 0.0;
      hits[top ? (right ? 1 : 0) : (right ? 3 : 2)] += 1.0;
    }
    const auto f = quadrant_fractions(theta, cfg).as_array();
    for (int q = 0; q < 4; ++q) CHECK(std::abs(f[q] - hits[q] / n) < 1e-3);
  }
}

TEST_CASE("f_qrx shape") {
  QrxOpticalConfig cfg;
  CHECK(f_qrx(0.0, cfg) == doctest::Approx(0.0));
  CHECK(f_qrx(fov(cfg), cfg) == doctest::Approx(1.0));
  CHECK(f_qrx(deg2rad(82.0), cfg) == doctest::Approx(1.0));
  CHECK(f_qrx(-deg2rad(82.0), cfg) == doctest::Approx(-1.0));
  for (double deg = 1.0; deg < 80.0; deg += 3.7) {
    CHECK(f_qrx(-deg2rad(deg), cfg) == doctest::Approx(-f_qrx(deg2rad(deg), cfg)));
  }
  try {
    (void)phi_from_quadrants({0, 0, 0, 0});
    FAIL("expected ZeroIllumination");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroIllumination);
  }
}

TEST_CASE("g_QRX lookup table") {
  QrxOpticalConfig cfg;
  const GqrxTable table = build_g_qrx(cfg);
  CHECK(table.size() == GqrxTable::kDefaultPoints);
  CHECK(rad2deg(table.theta_fov()) == doctest::Approx(80.06).epsilon(1e-3));
  CHECK(table.lookup(0.0) == doctest::Approx(0.0).epsilon(1e-9));

  double worst = 0.0;
  for (double deg = -50.0; deg <= 50.0; deg += 0.25) {
    const double th = deg2rad(deg);
    worst = std::max(worst, std::abs(table.lookup(f_qrx(th, cfg)) - th));
  }
  CHECK(rad2deg(worst) < 0.1);

  QrxOpticalConfig wide = cfg;
  wide.lens_diameter_mm = 10.0;
  wide.lens_qpd_distance_mm = 0.1;
  CHECK_FALSE(wide.satisfies_bijection_guard());
  try {
    (void)build_g_qrx(wide);
    FAIL("expected BijectionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BijectionViolated);
  }
}
