#pragma once

#include <vector>

#include "vlcloc/channel.hpp"
#include "vlcloc/sim.hpp"

namespace vlcloc {

/// One grid location: (x_m, y_m) is the target rear bumper centre relative to the ego front
/// bumper centre. mean_err_m is NaN when no orientation/seed produced an estimate.
struct HeatmapCell {
  double x_m = 0.0;
  double y_m = 0.0;
  double mean_err_m = 0.0;
  double availability = 0.0;  ///< fraction of (orientation, repeat) trials with a valid estimate
};

struct Heatmap {
  ChannelCondition condition;
  std::vector<HeatmapCell> cells;  ///< row-major: y outer, x inner
};

/// Per-location mean of ||e|| over the SM4 orientation set and config.repeats seeds, for each
/// channel condition. All conditions share the same per-trial seeds.
std::vector<Heatmap> sweep_grid(const RunConfig& config,
                                const std::vector<ChannelCondition>& conditions);

/// Largest distance r from the ego bumper centre such that, in every radial bin of width
/// `bin_m` up to r, the median error of the available cells is <= threshold_m. Bins without
/// available cells are skipped. Returns 0 when the first populated bin already fails.
double accuracy_radius(const std::vector<HeatmapCell>& cells, double threshold_m,
                       double bin_m = 0.5);

}  // namespace vlcloc
