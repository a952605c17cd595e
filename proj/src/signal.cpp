#include "vlcloc/signal.hpp"

#include <algorithm>
#include <cmath>

#include "vlcloc/core.hpp"
#include "vlcloc/error.hpp"

namespace vlcloc {

void BfskConfig::validate() const {
  if (!(sample_period > 0.0) || !(bit_rate > 0.0) || !(tone0_hz > 0.0) || !(tone1_hz > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "BFSK rates must be positive");
  }
  if (tone0_hz == tone1_hz) throw Error(ErrorCode::InvalidParams, "BFSK tones must differ");
  if (!(1.0 / sample_period > 2.0 * std::max(tone0_hz, tone1_hz))) {
    throw Error(ErrorCode::InvalidParams, "sampling rate below Nyquist for the BFSK tones");
  }
  const double spb = 1.0 / (sample_period * bit_rate);
  if (std::abs(spb - std::round(spb)) > 1e-6 * spb || std::round(spb) < 1.0) {
    throw Error(ErrorCode::InvalidParams, "bit period must be an integer number of samples");
  }
}

std::size_t BfskConfig::samples_per_bit() const {
  return static_cast<std::size_t>(std::llround(1.0 / (sample_period * bit_rate)));
}

std::vector<double> bfsk_modulate(std::span<const std::uint8_t> bits, const BfskConfig& cfg) {
  const std::size_t spb = cfg.samples_per_bit();
  std::vector<double> out;
  out.reserve(bits.size() * spb);
  double phase = 0.0;
  for (std::uint8_t b : bits) {
    const double step = 2.0 * kPi * (b ? cfg.tone1_hz : cfg.tone0_hz) * cfg.sample_period;
    for (std::size_t k = 0; k < spb; ++k) {
      out.push_back(cfg.amplitude * std::sin(phase));
      phase = std::fmod(phase + step, 2.0 * kPi);
    }
  }
  return out;
}

namespace {

double tone_energy(std::span<const double> x, double freq, double ts) {
  double c = 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double arg = 2.0 * kPi * freq * ts * static_cast<double>(k);
    c += x[k] * std::cos(arg);
    s += x[k] * std::sin(arg);
  }
  return c * c + s * s;
}

}  // namespace

Demodulated demod_remod(std::span<const double> samples, const BfskConfig& cfg,
                        double margin_threshold) {
  const std::size_t spb = cfg.samples_per_bit();
  if (samples.size() < spb) {
    throw Error(ErrorCode::InvalidParams, "buffer shorter than one bit");
  }
  Demodulated out;
  std::size_t weak = 0;
  for (std::size_t start = 0; start < samples.size(); start += spb) {
    const auto bit = samples.subspan(start, std::min(spb, samples.size() - start));
    const double e0 = tone_energy(bit, cfg.tone0_hz, cfg.sample_period);
    const double e1 = tone_energy(bit, cfg.tone1_hz, cfg.sample_period);
    const double total = e0 + e1;
    const double margin = total > 0.0 ? std::abs(e1 - e0) / total : 0.0;
    if (margin < margin_threshold) ++weak;
    out.bits.push_back(e1 > e0 ? 1 : 0);
  }
  out.weak_bit_fraction = static_cast<double>(weak) / static_cast<double>(out.bits.size());
  if (out.weak_bit_fraction > 0.5) {
    throw Error(ErrorCode::DecodeFailure, "tone energy margin too low on most bits");
  }
  out.clean = bfsk_modulate(out.bits, cfg);
  out.clean.resize(samples.size());
  for (double& v : out.clean) v /= cfg.amplitude;
  return out;
}

std::array<double, 4> estimate_quadrant_power(const QuadrantBuffer& buffer,
                                              std::span<const double> s_hat) {
  if (s_hat.size() != buffer.size() || buffer.size() == 0) {
    throw Error(ErrorCode::InvalidParams, "s_hat length must match the buffer");
  }
  std::array<double, 4> eps{};
  for (int q = 0; q < 4; ++q) {
    const auto& r = buffer.readings[q];
    double acc = 0.0;
    for (std::size_t w = 0; w < r.size(); ++w) acc += r[w] * s_hat[w];
    eps[q] = acc / static_cast<double>(r.size());
  }
  return eps;
}

AoAMeasurement measure_aoa(const std::array<double, 4>& quadrant_power, const GqrxTable& table,
                           double timestamp) {
  const double total = quadrant_power[0] + quadrant_power[1] + quadrant_power[2] +
                       quadrant_power[3];
  if (!(total > 0.0)) {
    throw Error(ErrorCode::InvalidPower, "quadrant power sum is not positive");
  }
  AoAMeasurement m;
  m.quadrant_power = quadrant_power;
  m.timestamp = timestamp;
  const double phi = ((quadrant_power[1] + quadrant_power[3]) -
                      (quadrant_power[0] + quadrant_power[2])) / total;
  m.valid = std::abs(phi) < 1.0;
  m.phi_hat = std::clamp(phi, -1.0, 1.0);
  m.theta_hat = table.lookup(m.phi_hat);
  return m;
}

LatencyReport latency(const LatencyModel& model, std::size_t h_buf, double sample_period) {
  if (h_buf < 1) throw Error(ErrorCode::InvalidParams, "h_buf must be >= 1");
  const double h = static_cast<double>(h_buf);
  LatencyReport r;
  r.vlc_s = model.clock_period_s * (model.k_alpha * h * std::log2(h) + model.k_beta);
  r.vlp_s = model.clock_period_s * (2.0 * h + model.lookup_ops);
  r.processing_s = r.vlc_s + r.vlp_s;
  r.rate_hz = 1.0 / (sample_period * h);
  r.fixed_delay_s = 0.5 * sample_period * h + r.processing_s;
  return r;
}

std::vector<double> bandpass_filter(std::span<const double> x, double f_low, double f_high,
                                    double sample_period) {
  const double fs = 1.0 / sample_period;
  const double f0 = std::sqrt(f_low * f_high);
  const double bw_oct = std::log2(f_high / f_low) + 1.0;  // keep both tones inside the passband
  const double w0 = 2.0 * kPi * f0 / fs;
  const double alpha = std::sin(w0) * std::sinh(std::log(2.0) / 2.0 * bw_oct * w0 / std::sin(w0));
  const double a0 = 1.0 + alpha;
  const double b0 = alpha / a0;
  const double b2 = -alpha / a0;
  const double a1 = -2.0 * std::cos(w0) / a0;
  const double a2 = (1.0 - alpha) / a0;

  std::vector<double> y(x.size());
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double v = b0 * x[n] + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x[n];
    y2 = y1;
    y1 = v;
    y[n] = v;
  }
  return y;
}

}  // namespace vlcloc
