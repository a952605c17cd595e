#include "vlcloc/channel.hpp"

#include <algorithm>
#include <cmath>

#include "vlcloc/error.hpp"
#include "vlcloc/quadrant_buffer.hpp"

namespace vlcloc {

std::string_view to_string(Ambient a) {
  return a == Ambient::Night ? "night" : "day";
}

std::string_view to_string(Weather w) {
  switch (w) {
    case Weather::Clear: return "clear";
    case Weather::Rain: return "rain";
    case Weather::Fog: return "fog";
  }
  return "clear";
}

Ambient parse_ambient(std::string_view s) {
  if (s == "night") return Ambient::Night;
  if (s == "day" || s == "day_indirect") return Ambient::DayIndirect;
  throw Error(ErrorCode::InvalidConfig, "unknown ambient '" + std::string(s) + "'");
}

Weather parse_weather(std::string_view s) {
  if (s == "clear") return Weather::Clear;
  if (s == "rain") return Weather::Rain;
  if (s == "fog") return Weather::Fog;
  throw Error(ErrorCode::InvalidConfig, "unknown weather '" + std::string(s) + "'");
}

double ChannelCondition::default_background(Ambient a) {
  return a == Ambient::Night ? 10e-6 : 750e-6;
}

double ChannelCondition::default_attenuation(Weather w) {
  switch (w) {
    case Weather::Clear: return 0.0;
    case Weather::Rain: return 0.1;
    case Weather::Fog: return 0.3;
  }
  return 0.0;
}

ChannelCondition ChannelCondition::make(Ambient a, Weather w) {
  return ChannelCondition{a, w, default_background(a), default_attenuation(w)};
}

void ChannelCondition::validate() const {
  if (background_current_a < 0.0 || attenuation_db_per_m < 0.0) {
    throw Error(ErrorCode::InvalidParams, "background current and attenuation must be >= 0");
  }
}

void TiaConfig::validate() const {
  const double vals[] = {responsivity_a_per_w, bandwidth_hz, input_capacitance_f,
                         feedback_resistance_ohm, transconductance_s, channel_noise_factor,
                         noise_bandwidth_i2, noise_bandwidth_i3, temperature_k, open_loop_gain};
  for (double v : vals) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidParams, "TIA parameters must be positive");
  }
  const double rf_opt = open_loop_gain / (2.0 * kPi * bandwidth_hz * input_capacitance_f);
  if (std::abs(feedback_resistance_ohm - rf_opt) > 0.05 * rf_opt) {
    throw Error(ErrorCode::InvalidParams,
                "R_F inconsistent with G / (2 pi B C_T) by more than 5 %");
  }
}

void TxUnit::validate() const {
  if (!(optical_power_w > 0.0)) throw Error(ErrorCode::InvalidParams, "TX power must be > 0");
  if (lambertian_order < 1) throw Error(ErrorCode::InvalidParams, "Lambertian order must be >= 1");
  if (tone0_hz == tone1_hz || !(tone0_hz > 0.0) || !(tone1_hz > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "TX tones must be positive and distinct");
  }
}

int lambertian_order_from_half_power(double half_power_angle) {
  return static_cast<int>(std::floor(-std::log(2.0) / std::log(std::cos(half_power_angle))));
}

double lambertian_relative_intensity(int m, double phi) {
  if (std::abs(phi) >= 0.5 * kPi) return 0.0;
  return std::pow(std::cos(phi), m);
}

double lambertian_gain(int m, double phi) {
  return (m + 1) / (2.0 * kPi) * lambertian_relative_intensity(m, phi);
}

double weather_factor(double distance_m, const ChannelCondition& cond) {
  return std::pow(10.0, -cond.attenuation_db_per_m * distance_m / 10.0);
}

LinkGain link_gain(const TxUnit& tx, double aperture_area_m2, const LinkGeometry& geo,
                   const ChannelCondition& cond) {
  if (!link_visible(geo.tx_facing, geo.tx_pos, geo.rx_pos, geo.emission_half_angle,
                    geo.rx_fov)) {
    throw Error(ErrorCode::LinkDown, "receiver outside TX cone or TX outside receiver FoV");
  }
  const Vec2 ray = geo.tx_pos - geo.rx_pos;
  LinkGain g;
  g.distance_m = ray.norm();
  g.emission_angle = emission_angle(geo.tx_facing, geo.tx_pos, geo.rx_pos);
  g.incidence_aoa = std::atan2(ray.x, ray.y);
  const double collected = aperture_area_m2 * std::cos(g.incidence_aoa) /
                           (g.distance_m * g.distance_m);
  g.gain = weather_factor(g.distance_m, cond) *
           lambertian_gain(tx.lambertian_order, g.emission_angle) * collected;
  g.received_power_w = tx.optical_power_w * g.gain;
  return g;
}

double shot_noise_variance(double received_power_w, double background_current_a,
                           const TiaConfig& tia) {
  const double q = phys::kElectronCharge;
  return 2.0 * q * tia.responsivity_a_per_w * received_power_w * tia.bandwidth_hz +
         2.0 * q * background_current_a * tia.noise_bandwidth_i2 * tia.bandwidth_hz;
}

double thermal_noise_variance(const TiaConfig& tia, double capacitance_f) {
  const double b = tia.bandwidth_hz;
  const double two_pi_c = 2.0 * kPi * capacitance_f;
  return 4.0 * phys::kBoltzmann * tia.temperature_k *
         (tia.noise_bandwidth_i2 * b / tia.feedback_resistance_ohm +
          two_pi_c * two_pi_c / tia.transconductance_s * tia.channel_noise_factor *
              tia.noise_bandwidth_i3 * b * b * b);
}

double noise_variance(double received_power_w, const TiaConfig& tia,
                      const ChannelCondition& cond) {
  return shot_noise_variance(received_power_w, cond.background_current_a, tia) +
         thermal_noise_variance(tia, tia.input_capacitance_f);
}

double quadrant_noise_variance(double quadrant_power_w, const TiaConfig& tia,
                               const ChannelCondition& cond) {
  return shot_noise_variance(quadrant_power_w, 0.25 * cond.background_current_a, tia) +
         thermal_noise_variance(tia, tia.quadrant_capacitance());
}

void synthesize_into(QuadrantBuffer& buffer, std::size_t offset,
                     std::span<const LinkContribution> links, const TiaConfig& tia,
                     const ChannelCondition& cond, std::mt19937_64& rng, NoiseMode noise) {
  std::size_t n = 0;
  for (const auto& l : links) n = std::max(n, l.waveform.size());
  if (offset + n > buffer.size()) {
    throw Error(ErrorCode::InvalidParams, "synthesis range exceeds buffer length");
  }

  std::array<double, 4> sigma{};
  std::array<double, 4> quadrant_power{};
  for (const auto& l : links) {
    const auto f = l.fractions.as_array();
    for (int q = 0; q < 4; ++q) quadrant_power[q] += f[q] * l.received_power_w;
  }
  for (int q = 0; q < 4; ++q) {
    sigma[q] = noise == NoiseMode::On
                   ? std::sqrt(quadrant_noise_variance(quadrant_power[q], tia, cond))
                   : 0.0;
  }

  const double gamma = tia.responsivity_a_per_w;
  const double rf = tia.feedback_resistance_ohm;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t w = 0; w < n; ++w) {
    std::array<double, 4> current{};
    for (const auto& l : links) {
      if (w >= l.waveform.size()) continue;
      const double i_sig = gamma * l.received_power_w * l.waveform[w];
      const auto f = l.fractions.as_array();
      for (int q = 0; q < 4; ++q) current[q] += i_sig * f[q];
    }
    for (int q = 0; q < 4; ++q) {
      const double n_q = noise == NoiseMode::On ? sigma[q] * gauss(rng) : 0.0;
      buffer.readings[q][offset + w] = rf * (current[q] + n_q);
    }
  }
}

QuadrantBuffer synthesize_quadrant_readings(std::span<const LinkContribution> links,
                                            const TiaConfig& tia, const ChannelCondition& cond,
                                            double sample_period, std::uint64_t rng_seed,
                                            NoiseMode noise) {
  std::size_t n = 0;
  for (const auto& l : links) n = std::max(n, l.waveform.size());
  QuadrantBuffer buf(n, 0, sample_period);
  std::mt19937_64 rng(rng_seed);
  synthesize_into(buf, 0, links, tia, cond, rng, noise);
  return buf;
}

}  // namespace vlcloc
