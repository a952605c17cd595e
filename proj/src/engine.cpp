#include "vlcloc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "vlcloc/error.hpp"
#include "vlcloc/rng.hpp"

namespace vlcloc {

BfskConfig SystemConfig::bfsk(int tx_index) const {
  const TxUnit& t = tx_index == 1 ? tx1 : tx2;
  BfskConfig b;
  b.tone0_hz = t.tone0_hz;
  b.tone1_hz = t.tone1_hz;
  b.bit_rate = bit_rate;
  b.sample_period = sample_period;
  b.amplitude = 1.0;
  return b;
}

void SystemConfig::validate() const {
  vehicle.validate();
  tx1.validate();
  tx2.validate();
  optics.validate();
  tia.validate();
  channel.validate();
  bfsk(1).validate();
  bfsk(2).validate();
  if (!(emission_half_angle > 0.0) || emission_half_angle > 0.5 * kPi) {
    throw Error(ErrorCode::InvalidParams, "emission half-angle must be in (0, 90] deg");
  }
  if (!(aperture_area_m2 > 0.0)) throw Error(ErrorCode::InvalidParams, "aperture must be > 0");
  if (!(block_duration_s > 0.0)) throw Error(ErrorCode::InvalidParams, "block duration must be > 0");
  if (!(margin_threshold >= 0.0 && margin_threshold < 1.0)) {
    throw Error(ErrorCode::InvalidParams, "demodulator margin threshold must be in [0, 1)");
  }
  const std::array<double, 4> tones{tx1.tone0_hz, tx1.tone1_hz, tx2.tone0_hz, tx2.tone1_hz};
  for (std::size_t i = 0; i < tones.size(); ++i)
    for (std::size_t j = i + 1; j < tones.size(); ++j)
      if (tones[i] == tones[j]) throw Error(ErrorCode::InvalidParams, "TX tone pairs overlap");
}

namespace {

SystemConfig with_mounted_lights(SystemConfig cfg) {
  cfg.validate();
  const double half_len = 0.5 * cfg.vehicle.body_length;
  const double half_d = 0.5 * cfg.vehicle.tx_separation;
  const bool tail = cfg.mount == LightMount::Tail;
  cfg.tx1.local_offset = tail ? Vec2{-half_d, -half_len} : Vec2{half_d, half_len};
  cfg.tx2.local_offset = tail ? Vec2{half_d, -half_len} : Vec2{-half_d, half_len};
  cfg.tx1.facing = cfg.tx2.facing = tail ? kPi : 0.0;
  return cfg;
}

}  // namespace

Simulator::Simulator(SystemConfig cfg)
    : cfg_(with_mounted_lights(std::move(cfg))),
      table_(build_g_qrx(cfg_.optics, cfg_.table_points)),
      bfsk_{cfg_.bfsk(1), cfg_.bfsk(2)} {}

std::size_t Simulator::buffer_length(double rate_hz) const {
  if (!(rate_hz > 0.0)) throw Error(ErrorCode::InvalidParams, "rate must be positive");
  const double h = 1.0 / (rate_hz * cfg_.sample_period);
  const double hr = std::round(h);
  if (std::abs(h - hr) > 1e-6 * h || hr < 1.0) {
    throw Error(ErrorCode::InvalidParams, "1 / (f_u T_s) is not an integer sample count");
  }
  const auto h_buf = static_cast<std::size_t>(hr);
  if (h_buf % bfsk_[0].samples_per_bit() != 0) {
    throw Error(ErrorCode::InvalidParams, "buffer must hold a whole number of bits");
  }
  return h_buf;
}

RelativeTargetState Simulator::relative_state(const VehiclePose& ego,
                                              const VehiclePose& target) const {
  return relative_tx_positions(ego, target, cfg_.vehicle, cfg_.mount);
}

LinkGeometry Simulator::link_geometry(const RelativeTargetState& s, int rx, int tx) const {
  LinkGeometry g;
  g.tx_pos = s.tx(tx);
  g.tx_facing = s.facing(tx);
  g.rx_pos = rx_position(rx, cfg_.vehicle.rx_separation);
  g.emission_half_angle = cfg_.emission_half_angle;
  g.rx_fov = table_.theta_fov();
  return g;
}

bool Simulator::all_links_visible(const RelativeTargetState& s) const {
  for (int rx = 1; rx <= 2; ++rx)
    for (int t = 1; t <= 2; ++t) {
      const auto g = link_geometry(s, rx, t);
      if (!link_visible(g.tx_facing, g.tx_pos, g.rx_pos, g.emission_half_angle, g.rx_fov))
        return false;
    }
  return true;
}

CycleRecord Simulator::simulate_cycle(const PoseSource& poses, std::int64_t w0,
                                      std::size_t h_buf, std::uint64_t seed,
                                      TruthReference truth_at, CycleCapture* capture) const {
  const double ts = cfg_.sample_period;
  const std::size_t spb = bfsk_[0].samples_per_bit();
  if (h_buf == 0 || h_buf % spb != 0) {
    throw Error(ErrorCode::InvalidParams, "buffer must hold a whole number of bits");
  }
  std::mt19937_64 rng(seed);

  // Frames are aligned to buffers: each TX starts the buffer at phase 0.
  std::array<std::vector<double>, 2> waveform;
  std::bernoulli_distribution coin(0.5);
  for (int j = 0; j < 2; ++j) {
    std::vector<std::uint8_t> bits(h_buf / spb);
    for (auto& b : bits) b = coin(rng) ? 1 : 0;
    waveform[j] = bfsk_modulate(bits, bfsk_[j]);
  }

  CycleRecord rec;
  std::array<QuadrantBuffer, 2> buffers{QuadrantBuffer(h_buf, w0, ts),
                                        QuadrantBuffer(h_buf, w0, ts)};
  std::array<std::array<bool, 2>, 2> up{{{true, true}, {true, true}}};

  const auto block = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg_.block_duration_s / ts)));
  for (std::size_t start = 0; start < h_buf; start += block) {
    const std::size_t len = std::min(block, h_buf - start);
    const double t_mid =
        ts * (static_cast<double>(w0) + static_cast<double>(start) + 0.5 * static_cast<double>(len));
    const auto [ego, target] = poses(t_mid);
    const RelativeTargetState s = relative_state(ego, target);
    for (int i = 0; i < 2; ++i) {
      std::array<LinkContribution, 2> links{};
      std::size_t n_links = 0;
      for (int j = 0; j < 2; ++j) {
        const LinkGeometry geo = link_geometry(s, i + 1, j + 1);
        if (!link_visible(geo.tx_facing, geo.tx_pos, geo.rx_pos, geo.emission_half_angle,
                          geo.rx_fov)) {
          up[i][j] = false;
          continue;
        }
        const LinkGain g = link_gain(tx(j + 1), cfg_.aperture_area_m2, geo, cfg_.channel);
        LinkContribution& c = links[n_links++];
        c.waveform = std::span<const double>(waveform[j]).subspan(start, len);
        c.received_power_w = g.received_power_w;
        c.fractions = quadrant_fractions(g.incidence_aoa, cfg_.optics);
      }
      if (n_links == 0) {
        // Noise only: synthesise with a silent contribution of the right length.
        std::vector<double> silent(len, 0.0);
        LinkContribution c{silent, 0.0, {}};
        synthesize_into(buffers[i], start, std::span(&c, 1), cfg_.tia, cfg_.channel, rng,
                        cfg_.noise);
      } else {
        synthesize_into(buffers[i], start, std::span(links.data(), n_links), cfg_.tia,
                        cfg_.channel, rng, cfg_.noise);
      }
    }
  }

  rec.t = buffers[0].midpoint_time();
  rec.link_up = up;

  // Link budget at the buffer mid-point for reporting.
  {
    const auto [ego, target] = poses(rec.t);
    const RelativeTargetState s = relative_state(ego, target);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const LinkGeometry geo = link_geometry(s, i + 1, j + 1);
        rec.true_aoa[i][j] = std::atan2(geo.tx_pos.x - geo.rx_pos.x, geo.tx_pos.y - geo.rx_pos.y);
        double pr = 0.0;
        if (link_visible(geo.tx_facing, geo.tx_pos, geo.rx_pos, geo.emission_half_angle,
                         geo.rx_fov)) {
          pr = link_gain(tx(j + 1), cfg_.aperture_area_m2, geo, cfg_.channel).received_power_w;
        }
        const double i_sig = cfg_.tia.responsivity_a_per_w * pr;
        const double var = noise_variance(pr, cfg_.tia, cfg_.channel);
        rec.snr_db[i][j] = pr > 0.0 ? 10.0 * std::log10(0.5 * i_sig * i_sig / var)
                                    : -std::numeric_limits<double>::infinity();
      }
  }

  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      AoAMeasurement& m = rec.aoa[i][j];
      m.timestamp = rec.t;
      if (!up[i][j]) continue;
      try {
        const BfskConfig& b = bfsk_[j];
        if (cfg_.bandpass_prefilter) {
          const double lo = std::min(b.tone0_hz, b.tone1_hz);
          const double hi = std::max(b.tone0_hz, b.tone1_hz);
          QuadrantBuffer filtered(h_buf, w0, ts);
          for (int q = 0; q < 4; ++q)
            filtered.readings[q] = bandpass_filter(buffers[i].readings[q], lo, hi, ts);
          Demodulated d = demod_remod(filtered.total(), b, cfg_.margin_threshold);
          m = measure_aoa(estimate_quadrant_power(filtered, d.clean), table_, rec.t);
          if (capture) capture->s_hat[i][j] = std::move(d.clean);
        } else {
          Demodulated d = demod_remod(buffers[i].total(), b, cfg_.margin_threshold);
          m = measure_aoa(estimate_quadrant_power(buffers[i], d.clean), table_, rec.t);
          if (capture) capture->s_hat[i][j] = std::move(d.clean);
        }
      } catch (const Error&) {
        m = AoAMeasurement{};
        m.timestamp = rec.t;
      }
    }
  }

  const double l = cfg_.vehicle.rx_separation;
  rec.estimate.timestamp = rec.t;
  auto locate = [&](int j, Vec2& out) {
    if (!rec.aoa[0][j].valid || !rec.aoa[1][j].valid) return false;
    try {
      out = triangulate(rec.aoa[0][j].theta_hat, rec.aoa[1][j].theta_hat, l);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  rec.estimate.valid1 = locate(0, rec.estimate.p1);
  rec.estimate.valid2 = locate(1, rec.estimate.p2);

  if (capture) capture->buffers = buffers;

  rec.truth_time = rec.t;
  if (truth_at != TruthReference::Midpoint) {
    rec.truth_time = ts * static_cast<double>(w0 + static_cast<std::int64_t>(h_buf)) +
                     latency(cfg_.latency, h_buf, ts).processing_s;
    if (truth_at == TruthReference::Held) rec.truth_time += 0.5 * ts * static_cast<double>(h_buf);
  }
  {
    const auto [ego, target] = poses(rec.truth_time);
    rec.truth = relative_state(ego, target);
  }
  if (rec.estimate.valid()) rec.error = localization_error(rec.truth, rec.estimate);
  return rec;
}

CycleRecord Simulator::simulate_static(const VehiclePose& ego, const VehiclePose& target,
                                       std::size_t h_buf, std::uint64_t seed) const {
  const PosePair fixed{ego, target};
  return simulate_cycle([fixed](double) { return fixed; }, 0, h_buf, seed);
}

}  // namespace vlcloc
