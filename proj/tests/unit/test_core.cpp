#include <cmath>
#include <random>

#include "doctest.h"
#include "vlcloc/core.hpp"
#include "vlcloc/error.hpp"
#include "vlcloc/vlp.hpp"

using namespace vlcloc;

namespace {
// Target parked straight ahead with its rear bumper `gap` metres beyond the ego front bumper,
// its centre shifted `dx` metres to the right of the ego centre.
VehiclePose target_ahead(double gap, double dx, double heading = 0.0) {
  const VehicleGeometry g;
  return {dx, g.body_length + gap, heading};
}
}  // namespace

TEST_CASE("relative TX positions in the receiver frame") {
  const VehicleGeometry g;
  const VehiclePose ego{0.0, 0.0, 0.0};

  SUBCASE("aligned vehicles") {
    const auto s = relative_tx_positions(ego, target_ahead(5.0, 0.0), g);
    CHECK(s.p1.x == doctest::Approx(0.0));
    CHECK(s.p1.y == doctest::Approx(5.0));
    CHECK(s.p2.x == doctest::Approx(1.6));
    CHECK(s.p2.y == doctest::Approx(5.0));
    CHECK(std::abs(s.facing1) == doctest::Approx(kPi));
  }
  SUBCASE("lateral shift is a pure translation") {
    const auto s = relative_tx_positions(ego, target_ahead(5.0, 0.8), g);
    CHECK(s.p1.x == doctest::Approx(0.8));
    CHECK(s.p1.y == doctest::Approx(5.0));
    CHECK(s.p2.x == doctest::Approx(2.4));
    CHECK(s.p2.y == doctest::Approx(5.0));
  }
  SUBCASE("rotation keeps the light separation") {
    for (double psi : {-0.5, -0.2, 0.1, 0.4}) {
      const auto s = relative_tx_positions(ego, target_ahead(5.0, 0.3, psi), g);
      CHECK((s.p1 - s.p2).norm() == doctest::Approx(g.tx_separation).epsilon(1e-12));
    }
  }
  SUBCASE("ego pose is factored out") {
    const VehiclePose moved{12.0, -4.0, 0.7};
    const VehiclePose target{moved.to_parent({0.4, 9.0}).x, moved.to_parent({0.4, 9.0}).y, 0.7};
    const auto a = relative_tx_positions(moved, target, g);
    const auto b = relative_tx_positions(ego, VehiclePose{0.4, 9.0, 0.0}, g);
    CHECK(a.p1.x == doctest::Approx(b.p1.x));
    CHECK(a.p1.y == doctest::Approx(b.p1.y));
    CHECK(a.p2.x == doctest::Approx(b.p2.x));
    CHECK(a.p2.y == doctest::Approx(b.p2.y));
  }
}

TEST_CASE("true AoA") {
  CHECK(true_aoa({0.0, 5.0}, 1, 1.6) == doctest::Approx(0.0));
  CHECK(rad2deg(true_aoa({1.6, 1.6}, 1, 1.6)) == doctest::Approx(45.0));
  CHECK(rad2deg(true_aoa({1.6, 1.6}, 2, 1.6)) == doctest::Approx(0.0));
  // atan(0.8 / 5) evaluated separately: 9.0903 deg.
  CHECK(rad2deg(true_aoa({0.8, 5.0}, 1, 1.6)) == doctest::Approx(9.0903).epsilon(1e-4));
  CHECK(rad2deg(true_aoa({0.8, 5.0}, 2, 1.6)) == doctest::Approx(-9.0903).epsilon(1e-4));

  try {
    (void)true_aoa({0.3, 0.0}, 1, 1.6);
    FAIL("expected BehindBaseline");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BehindBaseline);
  }
  CHECK(true_aoa({-1.0, 2.0}, 1, 1.6) == doctest::Approx(-true_aoa({1.0, 2.0}, 1, 1.6)));
}

TEST_CASE("link visibility") {
  const double wide = deg2rad(80.0);
  CHECK(link_visible(kPi, {0.0, 5.0}, {0.0, 0.0}, deg2rad(60.0), wide));
  CHECK_FALSE(link_visible(0.0, {0.0, 5.0}, {0.0, 0.0}, deg2rad(60.0), wide));
  // Receiver 85 deg off the TX boresight and TX 85 deg off the receiver boresight.
  const Vec2 tx{std::sin(deg2rad(85.0)) * 5.0, std::cos(deg2rad(85.0)) * 5.0};
  CHECK_FALSE(link_visible(kPi, tx, {0.0, 0.0}, deg2rad(89.0), wide));
  CHECK(emission_angle(kPi, {0.0, 5.0}, {0.0, 0.0}) == doctest::Approx(0.0));
  CHECK(incidence_angle({5.0, 5.0}, {0.0, 0.0}) == doctest::Approx(kPi / 4));
}

TEST_CASE("angle helpers") {
  CHECK(normalize_angle(3 * kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(-kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(0.25) == doctest::Approx(0.25));
  const VehiclePose p{1.0, 2.0, kPi / 2};
  CHECK(p.forward().x == doctest::Approx(-1.0));
  CHECK(p.to_parent({1.0, 0.0}).y == doctest::Approx(3.0));
}

TEST_CASE("triangulation inverts the bearing model over 1e5 geometries") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(-6.0, 6.0), uy(1.0, 15.0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Vec2 p{ux(rng), uy(rng)};
    const Vec2 q = triangulate(true_aoa(p, 1, 1.6), true_aoa(p, 2, 1.6), 1.6);
    worst = std::max(worst, (q - p).norm());
  }
  CHECK(worst < 1e-9);
}
