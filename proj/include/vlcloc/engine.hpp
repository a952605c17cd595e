#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "vlcloc/channel.hpp"
#include "vlcloc/core.hpp"
#include "vlcloc/optics.hpp"
#include "vlcloc/quadrant_buffer.hpp"
#include "vlcloc/signal.hpp"
#include "vlcloc/vlp.hpp"

namespace vlcloc {

/// Which instant an estimate is compared against.
enum class TruthReference {
  Midpoint,   ///< buffer mid-point, the instant the measurement describes
  Available,  ///< end of buffer plus processing time, when the estimate can be used
  Held,       ///< middle of the update period during which the estimate is the latest one
};

/// Physical and receiver-side configuration shared by every simulation mode.
struct SystemConfig {
  VehicleGeometry vehicle;
  LightMount mount = LightMount::Tail;
  TxUnit tx1{{-0.8, -2.5}, kPi, 2.0, 11, 5000.0, 6000.0};
  TxUnit tx2{{0.8, -2.5}, kPi, 2.0, 11, 12000.0, 13000.0};
  double emission_half_angle = deg2rad(60.0);
  double aperture_area_m2 = 50e-6;
  QrxOpticalConfig optics;
  std::size_t table_points = GqrxTable::kDefaultPoints;
  TiaConfig tia;
  ChannelCondition channel;
  double sample_period = 1.0 / 30000.0;
  double bit_rate = 1000.0;
  double margin_threshold = 0.7;
  bool bandpass_prefilter = false;
  NoiseMode noise = NoiseMode::On;
  LatencyModel latency;
  double block_duration_s = 1e-3;  ///< geometry refresh interval inside a buffer

  BfskConfig bfsk(int tx_index) const;
  void validate() const;
};

/// Everything produced by one estimation cycle.
struct CycleRecord {
  double t = 0.0;                  ///< estimate timestamp (buffer mid-point)
  double truth_time = 0.0;         ///< instant the truth below refers to
  RelativeTargetState truth;
  PositionEstimate estimate;
  LocalizationError error;         ///< only meaningful when estimate.valid()
  /// aoa[i][j]: QRX i+1, TX j+1.
  std::array<std::array<AoAMeasurement, 2>, 2> aoa{};
  std::array<std::array<double, 2>, 2> true_aoa{};
  std::array<std::array<double, 2>, 2> snr_db{};
  std::array<std::array<bool, 2>, 2> link_up{};
};

/// Raw material of one cycle, for debugging dumps.
struct CycleCapture {
  std::array<QuadrantBuffer, 2> buffers;  ///< per QRX
  /// s_hat[i][j]: remodulated waveform of TX j+1 as decoded at QRX i+1; empty when the link
  /// was down or decoding failed.
  std::array<std::array<std::vector<double>, 2>, 2> s_hat;
};

using PosePair = std::pair<VehiclePose, VehiclePose>;  ///< (ego, target)
using PoseSource = std::function<PosePair(double t)>;

/// Runs the receive chain: geometry -> link gains -> quadrant synthesis (with the geometry
/// refreshed every block) -> demod/remod -> correlation -> g_QRX -> triangulation.
class Simulator {
 public:
  explicit Simulator(SystemConfig cfg);

  const SystemConfig& config() const { return cfg_; }
  const GqrxTable& table() const { return table_; }
  double qrx_fov() const { return table_.theta_fov(); }

  /// Number of samples per buffer for localisation rate `rate_hz`. Throws InvalidParams when
  /// the buffer is not a whole number of bits.
  std::size_t buffer_length(double rate_hz) const;

  CycleRecord simulate_cycle(const PoseSource& poses, std::int64_t w0, std::size_t h_buf,
                             std::uint64_t seed,
                             TruthReference truth_at = TruthReference::Midpoint,
                             CycleCapture* capture = nullptr) const;

  CycleRecord simulate_static(const VehiclePose& ego, const VehiclePose& target,
                              std::size_t h_buf, std::uint64_t seed) const;

  RelativeTargetState relative_state(const VehiclePose& ego, const VehiclePose& target) const;
  /// True when all four TX->QRX links are geometrically visible.
  bool all_links_visible(const RelativeTargetState& s) const;
  LinkGeometry link_geometry(const RelativeTargetState& s, int rx, int tx) const;
  const TxUnit& tx(int index) const { return index == 1 ? cfg_.tx1 : cfg_.tx2; }

 private:
  SystemConfig cfg_;
  GqrxTable table_;
  std::array<BfskConfig, 2> bfsk_;
};

}  // namespace vlcloc
