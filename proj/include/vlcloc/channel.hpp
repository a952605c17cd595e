#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "vlcloc/core.hpp"
#include "vlcloc/optics.hpp"

namespace vlcloc {

struct QuadrantBuffer;

namespace phys {
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
}  // namespace phys

enum class Ambient { Night, DayIndirect };
enum class Weather { Clear, Rain, Fog };

std::string_view to_string(Ambient a);
std::string_view to_string(Weather w);
Ambient parse_ambient(std::string_view s);
Weather parse_weather(std::string_view s);

/// Ambient light and weather context of a run.
struct ChannelCondition {
  Ambient ambient = Ambient::Night;
  Weather weather = Weather::Clear;
  double background_current_a = 10e-6;  ///< I_bg, whole receiver
  double attenuation_db_per_m = 0.0;

  static double default_background(Ambient a);
  static double default_attenuation(Weather w);
  /// Condition with the default background current and attenuation of each category.
  static ChannelCondition make(Ambient a, Weather w);

  void validate() const;
};

/// Receiver front end of one quadrant. Defaults are the simulated QRX TIA.
struct TiaConfig {
  double responsivity_a_per_w = 0.5;  ///< gamma_i
  double bandwidth_hz = 10e6;         ///< B
  double input_capacitance_f = 45e-12;
  double feedback_resistance_ohm = 2840.0;
  double transconductance_s = 30e-3;
  double channel_noise_factor = 1.5;  ///< Gamma
  double noise_bandwidth_i2 = 0.562;  ///< I_B2
  double noise_bandwidth_i3 = 0.0868; ///< I_B3
  double temperature_k = 298.0;
  double open_loop_gain = 8.03;
  /// When false, input_capacitance_f is the whole-QPD value and each quadrant sees a quarter.
  bool capacitance_per_quadrant = true;

  /// Positivity plus R_F = G / (2 pi B C_T) within 5 %.
  void validate() const;
  double quadrant_capacitance() const {
    return capacitance_per_quadrant ? input_capacitance_f : 0.25 * input_capacitance_f;
  }
};

/// A light source mounted on the target vehicle.
struct TxUnit {
  Vec2 local_offset{};   ///< vehicle frame (right, forward), metres
  double facing = kPi;   ///< vehicle frame; pi = rearward (tail light)
  double optical_power_w = 2.0;
  int lambertian_order = 11;
  double tone0_hz = 5000.0;
  double tone1_hz = 6000.0;

  void validate() const;
};

/// Lambertian order whose relative intensity falls to one half at `half_power_angle`.
int lambertian_order_from_half_power(double half_power_angle);
/// cos^m(phi), zero outside the forward hemisphere.
double lambertian_relative_intensity(int m, double phi);
/// Radiant intensity per watt, ((m + 1) / 2 pi) cos^m(phi).
double lambertian_gain(int m, double phi);

/// Optical power remaining after `distance` metres of weather attenuation.
double weather_factor(double distance_m, const ChannelCondition& cond);

struct LinkGain {
  double gain = 0.0;              ///< H, received optical power per transmitted watt
  double received_power_w = 0.0;  ///< P_r
  double emission_angle = 0.0;
  double incidence_aoa = 0.0;     ///< signed theta
  double distance_m = 0.0;
};

struct LinkGeometry {
  Vec2 tx_pos;
  double tx_facing = 0.0;
  Vec2 rx_pos;
  double emission_half_angle = deg2rad(60.0);
  double rx_fov = deg2rad(80.0);
};

/// Line-of-sight power transfer to an aperture of `aperture_area_m2` facing +y.
/// Throws LinkDown when the link is not visible.
LinkGain link_gain(const TxUnit& tx, double aperture_area_m2, const LinkGeometry& geo,
                   const ChannelCondition& cond);

double shot_noise_variance(double received_power_w, double background_current_a,
                           const TiaConfig& tia);
double thermal_noise_variance(const TiaConfig& tia, double capacitance_f);
/// Whole-receiver variance sigma_shot^2 + sigma_thm^2 for received power P_r.
double noise_variance(double received_power_w, const TiaConfig& tia,
                      const ChannelCondition& cond);
/// One quadrant: its own share of signal power, a quarter of I_bg, and its own TIA.
double quadrant_noise_variance(double quadrant_power_w, const TiaConfig& tia,
                               const ChannelCondition& cond);

/// One TX's contribution to one QRX over a stretch of samples.
struct LinkContribution {
  std::span<const double> waveform;  ///< unit-amplitude transmitted signal
  double received_power_w = 0.0;     ///< peak received optical power
  QuadrantFractions fractions;
};

enum class NoiseMode { On, Off };

/// Writes TIA output voltages for samples [offset, offset + n) of `buffer`, n being the
/// waveform length. Contributions superpose; noise is independent per quadrant and sample.
void synthesize_into(QuadrantBuffer& buffer, std::size_t offset,
                     std::span<const LinkContribution> links, const TiaConfig& tia,
                     const ChannelCondition& cond, std::mt19937_64& rng,
                     NoiseMode noise = NoiseMode::On);

/// Whole-buffer convenience form seeded from `rng_seed`.
QuadrantBuffer synthesize_quadrant_readings(std::span<const LinkContribution> links,
                                            const TiaConfig& tia, const ChannelCondition& cond,
                                            double sample_period, std::uint64_t rng_seed,
                                            NoiseMode noise = NoiseMode::On);

}  // namespace vlcloc
