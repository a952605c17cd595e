#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vlcloc/channel.hpp"
#include "vlcloc/sim.hpp"

namespace vlcloc {

/// Geometry grid and noise source for the crlb-map subcommand. (x, y) is the TX1 position
/// relative to QRX1 with the target parallel to the ego, so p2 = p1 + (D, 0).
struct CrlbMapConfig {
  double x_min_m = -3.0;
  double x_max_m = 3.0;
  double y_min_m = 1.0;
  double y_max_m = 15.0;
  double step_m = 0.5;
  /// "analytic": per-link sigma from noise propagation at each geometry; "fixed": sigma_rad.
  std::string sigma_source = "analytic";
  double sigma_rad = 1e-3;
};

/// f_QRX curves for the qrx-design subcommand: the configured optics plus one curve per
/// extra lens-QPD distance.
struct QrxDesignConfig {
  std::size_t points = 721;  ///< samples over [-90, 90] deg
  std::vector<double> extra_lens_qpd_distances_mm{0.3, 1.0};
};

struct AppConfig {
  RunConfig run;
  /// Channel conditions for sweep; empty means the single run.system.channel.
  std::vector<ChannelCondition> conditions;
  CrlbMapConfig crlb_map;
  QrxDesignConfig qrx_design;
};

/// Parses a JSON document; omitted keys keep their defaults, unknown keys throw InvalidConfig.
AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::filesystem::path& path);
/// Canonical JSON with every field spelled out (sorted keys, fixed indentation).
std::string dump_config(const AppConfig& cfg);
/// FNV-1a 64 of dump_config, as 16 hex digits.
std::string config_hash(const AppConfig& cfg);

}  // namespace vlcloc
