#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vlcloc/engine.hpp"
#include "vlcloc/scenario.hpp"

namespace vlcloc {

/// One scenario run: system, preset, estimation rate and seeding.
struct RunConfig {
  SystemConfig system;
  ScenarioPreset preset = ScenarioPreset::SM2;
  ScenarioParams scenario;
  double rate_hz = 50.0;  ///< f_u
  std::uint64_t seed = 1;
  std::size_t repeats = 1;
  TruthReference truth_at = TruthReference::Midpoint;

  /// f_u in [10, 1000] Hz, f_u h_buf T_s = 1 with whole bits per buffer, repeats >= 1.
  void validate() const;
};

struct RunRecord {
  std::size_t repeat = 0;
  std::size_t location = 0;  ///< static presets: index into the location set
  CycleRecord cycle;
};

struct RunSummary {
  std::size_t cycles = 0;
  std::size_t valid_cycles = 0;
  double availability = 0.0;  ///< fraction of cycles with both estimates valid
  double mean_e1_m = 0.0;
  double mean_e2_m = 0.0;
  double mean_norm_m = 0.0;
  double p50_norm_m = 0.0;
  double p95_norm_m = 0.0;
  double max_norm_m = 0.0;
  std::array<double, 2> mean_abs_dx_m{};  ///< per TX, ego-frame |x_hat - x|
  std::array<double, 2> mean_abs_dy_m{};
};

struct RunResult {
  std::size_t h_buf = 0;
  std::vector<RunRecord> records;  ///< ordered by (repeat, cycle)
  RunSummary summary;
};

/// Summary statistics over the valid records; NaN means when no record is valid.
RunSummary summarize(const std::vector<RunRecord>& records);
/// Same, restricted to records whose timestamp lies in [t_begin, t_end).
RunSummary summarize_window(const std::vector<RunRecord>& records, double t_begin,
                            double t_end);

/// SM1/SM2: floor(duration f_u) sequential cycles per repeat, repeats in parallel.
/// SM3: one cycle per static location and repeat. SM4 is a grid; use sweep_grid.
/// Link and decode failures become invalid cycles. Deterministic given the seed.
RunResult run(const RunConfig& config);

}  // namespace vlcloc
