#include <cmath>

#include "doctest.h"
#include "vlcloc/error.hpp"
#include "vlcloc/vlp.hpp"

using namespace vlcloc;

TEST_CASE("triangulation") {
  const Vec2 a = triangulate(kPi / 4, -kPi / 4, 1.6);
  CHECK(a.x == doctest::Approx(0.8));
  CHECK(a.y == doctest::Approx(0.8));

  const Vec2 b = triangulate(deg2rad(9.09), deg2rad(-9.09), 1.6);
  CHECK(std::abs(b.x - 0.8) < 1e-3);
  CHECK(std::abs(b.y - 5.0) < 1e-2);
  const Vec2 c = triangulate(std::atan(0.16), -std::atan(0.16), 1.6);
  CHECK(std::abs(c.x - 0.8) < 1e-12);
  CHECK(std::abs(c.y - 5.0) < 1e-12);

  try {
    (void)triangulate(0.2, 0.2, 1.6);
    FAIL("expected DegenerateGeometry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateGeometry);
  }
  try {
    (void)triangulate(-0.3, 0.3, 1.6);
    FAIL("expected NegativeRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeRange);
  }
}

TEST_CASE("localization error") {
  RelativeTargetState truth;
  truth.p1 = {0.8, 5.0};
  truth.p2 = {2.4, 5.0};
  PositionEstimate est;
  est.p1 = truth.p1;
  est.p2 = truth.p2;
  est.valid1 = est.valid2 = true;

  auto e = localization_error(truth, est);
  CHECK(e.e1 == 0.0);
  CHECK(e.e2 == 0.0);
  CHECK(e.norm == 0.0);

  est.p1 = truth.p1 + Vec2{0.03, 0.04};
  e = localization_error(truth, est);
  CHECK(e.e1 == doctest::Approx(0.05));
  CHECK(e.norm == doctest::Approx(0.05));

  est.p2 = truth.p2 + Vec2{-0.04, 0.03};
  e = localization_error(truth, est);
  CHECK(e.norm == doctest::Approx(0.0707107).epsilon(1e-5));

  est.valid2 = false;
  try {
    (void)localization_error(truth, est);
    FAIL("expected Unavailable");
  } catch (const Error& e2) {
    CHECK(e2.code() == ErrorCode::Unavailable);
  }
}
