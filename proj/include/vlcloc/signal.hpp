#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "vlcloc/optics.hpp"
#include "vlcloc/quadrant_buffer.hpp"

namespace vlcloc {

/// Binary FSK waveform parameters of one TX.
struct BfskConfig {
  double tone0_hz = 5000.0;
  double tone1_hz = 6000.0;
  double bit_rate = 1000.0;
  double sample_period = 1.0 / 30000.0;  ///< T_s
  double amplitude = 1.0;

  /// Nyquist (1/T_s > 2 max tone), distinct tones, integer samples per bit.
  void validate() const;
  std::size_t samples_per_bit() const;
};

/// Phase-continuous BFSK, starting at phase 0. Output has bits.size() * samples_per_bit samples.
std::vector<double> bfsk_modulate(std::span<const std::uint8_t> bits, const BfskConfig& cfg);

struct Demodulated {
  std::vector<std::uint8_t> bits;
  std::vector<double> clean;  ///< remodulated unit-amplitude waveform, same length as input
  double weak_bit_fraction = 0.0;
};

/// Per-bit noncoherent two-tone correlation (quadrature pair per tone), then remodulation.
/// A bit is weak when |E1 - E0| / (E1 + E0) < margin_threshold; DecodeFailure is thrown when
/// more than half of the bits are weak.
Demodulated demod_remod(std::span<const double> samples, const BfskConfig& cfg,
                        double margin_threshold = 0.7);

/// Correlation power estimate eps_q = (1/h_buf) sum_w Q_q[w] * s_hat[w].
std::array<double, 4> estimate_quadrant_power(const QuadrantBuffer& buffer,
                                              std::span<const double> s_hat);

struct AoAMeasurement {
  double theta_hat = 0.0;
  double phi_hat = 0.0;
  std::array<double, 4> quadrant_power{};
  double timestamp = 0.0;
  bool valid = false;
};

/// Phi from the quadrant estimates, theta via g_QRX. Saturated |Phi| >= 1 is clamped and
/// flagged invalid; a non-positive power sum throws InvalidPower.
AoAMeasurement measure_aoa(const std::array<double, 4>& quadrant_power, const GqrxTable& table,
                           double timestamp = 0.0);

struct LatencyModel {
  double k_alpha = 1.0;
  double k_beta = 0.0;
  double lookup_ops = 64.0;         ///< h_LU
  double clock_period_s = 0.33e-9;  ///< T_FP
};

struct LatencyReport {
  double vlc_s = 0.0;          ///< demodulation + remodulation
  double vlp_s = 0.0;          ///< correlation, ratio and lookup
  double processing_s = 0.0;   ///< t_uP
  double rate_hz = 0.0;        ///< f_u = 1 / (T_s h_buf)
  double fixed_delay_s = 0.0;  ///< T_s h_buf / 2 + t_uP
};

LatencyReport latency(const LatencyModel& model, std::size_t h_buf, double sample_period);

/// Second-order band-pass (RBJ biquad) centred between f_low and f_high, zero initial state.
std::vector<double> bandpass_filter(std::span<const double> samples, double f_low,
                                    double f_high, double sample_period);

}  // namespace vlcloc
