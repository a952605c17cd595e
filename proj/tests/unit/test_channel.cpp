#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "vlcloc/channel.hpp"
#include "vlcloc/error.hpp"
#include "vlcloc/quadrant_buffer.hpp"
#include "vlcloc/signal.hpp"

using namespace vlcloc;

namespace {
LinkGeometry on_axis(double distance) {
  LinkGeometry g;
  g.tx_pos = {0.0, distance};
  g.tx_facing = kPi;
  g.rx_pos = {0.0, 0.0};
  return g;
}
}  // namespace

TEST_CASE("Lambertian emitter") {
  CHECK(lambertian_relative_intensity(11, 0.0) == doctest::Approx(1.0));
  CHECK(lambertian_relative_intensity(11, deg2rad(20.0)) == doctest::Approx(0.505).epsilon(2e-3));
  CHECK(lambertian_order_from_half_power(deg2rad(20.0)) == 11);
  CHECK(lambertian_relative_intensity(11, deg2rad(95.0)) == 0.0);
  CHECK(lambertian_gain(1, 0.0) == doctest::Approx(1.0 / kPi));
}

TEST_CASE("weather attenuation") {
  const auto clear = ChannelCondition::make(Ambient::Night, Weather::Clear);
  const auto fog = ChannelCondition::make(Ambient::Night, Weather::Fog);
  const auto rain = ChannelCondition::make(Ambient::DayIndirect, Weather::Rain);
  CHECK(weather_factor(37.0, clear) == 1.0);
  CHECK(weather_factor(10.0, fog) == doctest::Approx(0.501187).epsilon(1e-5));
  CHECK(weather_factor(10.0, rain) == doctest::Approx(0.794328).epsilon(1e-5));
  for (double a : {0.5, 2.0, 7.5}) {
    for (double b : {1.0, 3.3}) {
      CHECK(weather_factor(a + b, fog) ==
            doctest::Approx(weather_factor(a, fog) * weather_factor(b, fog)));
    }
  }
}

TEST_CASE("line-of-sight link gain") {
  const TxUnit tx{{0.0, 0.0}, kPi, 2.0, 11, 5000.0, 6000.0};
  const auto clear = ChannelCondition::make(Ambient::Night, Weather::Clear);
  const double area = 50e-6;

  SUBCASE("hand-evaluated on-axis value") {
    const auto g = link_gain(tx, area, on_axis(5.0), clear);
    const double expected = 2.0 * (12.0 / (2.0 * 3.141592653589793)) * 50e-6 / 25.0;
    CHECK(std::abs(g.received_power_w - expected) < 1e-12 * expected);
    CHECK(g.distance_m == doctest::Approx(5.0));
  }
  SUBCASE("inverse square") {
    const double p5 = link_gain(tx, area, on_axis(5.0), clear).received_power_w;
    const double p10 = link_gain(tx, area, on_axis(10.0), clear).received_power_w;
    CHECK(p10 == doctest::Approx(p5 / 4.0));
  }
  SUBCASE("incidence cosine") {
    // Same distance and same emission angle; only the receiver tilt differs.
    LinkGeometry a = on_axis(4.0);
    LinkGeometry b;
    b.tx_pos = {4.0 * std::sin(deg2rad(60.0)), 4.0 * std::cos(deg2rad(60.0))};
    b.rx_pos = {0.0, 0.0};
    b.tx_facing = kPi - deg2rad(60.0);
    b.rx_fov = deg2rad(80.0);
    const double pa = link_gain(tx, area, a, clear).received_power_w;
    const double pb = link_gain(tx, area, b, clear).received_power_w;
    CHECK(pb == doctest::Approx(0.5 * pa));
  }
  SUBCASE("invisible link") {
    LinkGeometry g = on_axis(5.0);
    g.tx_facing = 0.0;
    try {
      (void)link_gain(tx, area, g, clear);
      FAIL("expected LinkDown");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LinkDown);
    }
  }
}

TEST_CASE("receiver noise") {
  const TiaConfig tia;
  const auto night = ChannelCondition::make(Ambient::Night, Weather::Clear);
  const auto day = ChannelCondition::make(Ambient::DayIndirect, Weather::Clear);
  // Independent evaluations with the simulated TIA values:
  //   2 q I_bg I_B2 B              = 2 * 1.602177e-19 * 10e-6 * 0.562 * 10e6       = 1.8008e-17
  //   4kT (I_B2 B / R_F + (2 pi C_T)^2 Gamma I_B3 B^3 / g_m)                        = 3.8276e-17
  CHECK(shot_noise_variance(0.0, night.background_current_a, tia) ==
        doctest::Approx(1.8008e-17).epsilon(1e-3));
  CHECK(thermal_noise_variance(tia, tia.input_capacitance_f) ==
        doctest::Approx(3.8276e-17).epsilon(1e-3));
  CHECK(shot_noise_variance(0.0, day.background_current_a, tia) ==
        doctest::Approx(75.0 * shot_noise_variance(0.0, night.background_current_a, tia)));
  CHECK(noise_variance(0.0, tia, night) ==
        doctest::Approx(1.8008e-17 + 3.8276e-17).epsilon(1e-3));
  CHECK_NOTHROW(tia.validate());

  SUBCASE("monotone in every driver") {
    TiaConfig wide = tia;
    wide.bandwidth_hz *= 2.0;
    CHECK(shot_noise_variance(1e-6, 1e-5, wide) > shot_noise_variance(1e-6, 1e-5, tia));
    CHECK(thermal_noise_variance(wide, tia.input_capacitance_f) >
          thermal_noise_variance(tia, tia.input_capacitance_f));
    TiaConfig hot = tia;
    hot.temperature_k += 20.0;
    CHECK(thermal_noise_variance(hot, tia.input_capacitance_f) >
          thermal_noise_variance(tia, tia.input_capacitance_f));
    CHECK(shot_noise_variance(2e-6, 1e-5, tia) > shot_noise_variance(1e-6, 1e-5, tia));
    CHECK(shot_noise_variance(1e-6, 2e-5, tia) > shot_noise_variance(1e-6, 1e-5, tia));
  }
  SUBCASE("per-quadrant split") {
    const double q = quadrant_noise_variance(1e-6, tia, day);
    CHECK(q == doctest::Approx(shot_noise_variance(1e-6, 0.25 * day.background_current_a, tia) +
                               thermal_noise_variance(tia, tia.input_capacitance_f)));
  }
}

TEST_CASE("quadrant synthesis") {
  const TiaConfig tia;
  const auto night = ChannelCondition::make(Ambient::Night, Weather::Clear);
  BfskConfig b1;
  BfskConfig b2;
  b2.tone0_hz = 12000.0;
  b2.tone1_hz = 13000.0;
  std::vector<std::uint8_t> bits(20);
  std::mt19937_64 bit_rng(3);
  for (auto& b : bits) b = static_cast<std::uint8_t>(bit_rng() & 1u);
  const auto w1 = bfsk_modulate(bits, b1);
  const auto w2 = bfsk_modulate(bits, b2);
  const QuadrantFractions centred{0.2, 0.2, 0.2, 0.2};
  const QuadrantFractions skewed{0.1, 0.3, 0.15, 0.35};

  SUBCASE("noiseless on-axis readings are identical") {
    const LinkContribution l{w1, 1e-5, centred};
    const auto buf = synthesize_quadrant_readings({&l, 1}, tia, night, b1.sample_period, 1,
                                                  NoiseMode::Off);
    for (int q = 1; q < 4; ++q) CHECK(buf.readings[q] == buf.readings[0]);
    CHECK(buf.readings[0][5] ==
          doctest::Approx(tia.feedback_resistance_ohm * tia.responsivity_a_per_w * 1e-5 * 0.2 *
                          w1[5]));
  }
  SUBCASE("superposition") {
    const LinkContribution l1{w1, 1e-5, centred};
    const LinkContribution l2{w2, 3e-6, skewed};
    const std::array<LinkContribution, 2> both{l1, l2};
    const auto sum = synthesize_quadrant_readings(both, tia, night, b1.sample_period, 1,
                                                  NoiseMode::Off);
    const auto a = synthesize_quadrant_readings({&l1, 1}, tia, night, b1.sample_period, 1,
                                                NoiseMode::Off);
    const auto b = synthesize_quadrant_readings({&l2, 1}, tia, night, b1.sample_period, 1,
                                                NoiseMode::Off);
    for (int q = 0; q < 4; ++q)
      for (std::size_t w = 0; w < sum.size(); ++w)
        CHECK(sum.readings[q][w] == doctest::Approx(a.readings[q][w] + b.readings[q][w]));
  }
  SUBCASE("correlation estimate is unbiased under noise") {
    const double pr = 2e-6;
    const LinkContribution l{w1, pr, skewed};
    const std::size_t trials = 10000;
    std::array<double, 4> mean{}, sq{};
    for (std::size_t k = 0; k < trials; ++k) {
      const auto buf = synthesize_quadrant_readings({&l, 1}, tia, night, b1.sample_period,
                                                    1000 + k);
      const auto eps = estimate_quadrant_power(buf, w1);
      for (int q = 0; q < 4; ++q) {
        mean[q] += eps[q];
        sq[q] += eps[q] * eps[q];
      }
    }
    const double ms = std::inner_product(w1.begin(), w1.end(), w1.begin(), 0.0) / w1.size();
    const auto f = skewed.as_array();
    for (int q = 0; q < 4; ++q) {
      const double m = mean[q] / trials;
      const double sd = std::sqrt(sq[q] / trials - m * m);
      const double expected =
          tia.feedback_resistance_ohm * tia.responsivity_a_per_w * pr * f[q] * ms;
      CHECK(std::abs(m - expected) < 3.0 * sd / std::sqrt(double(trials)));
    }
  }
  SUBCASE("same seed, same noise") {
    const LinkContribution l{w1, 1e-6, skewed};
    const auto a = synthesize_quadrant_readings({&l, 1}, tia, night, b1.sample_period, 99);
    const auto b = synthesize_quadrant_readings({&l, 1}, tia, night, b1.sample_period, 99);
    CHECK(a.readings == b.readings);
  }
}
