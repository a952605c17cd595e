#include "vlcloc/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "vlcloc/error.hpp"
#include "vlcloc/rng.hpp"

namespace vlcloc {

std::vector<Heatmap> sweep_grid(const RunConfig& config,
                                const std::vector<ChannelCondition>& conditions) {
  config.validate();
  const Scenario sc = gen_scenario(ScenarioPreset::SM4, config.scenario);
  const std::size_t n_head = config.scenario.sm4.headings_deg.size();
  const std::size_t n_cells = sc.locations.size() / n_head;
  const std::size_t trials_per_cell = n_head * config.repeats;

  std::vector<Heatmap> out;
  out.reserve(conditions.size());
  for (const auto& cond : conditions) {
    RunConfig rc = config;
    rc.system.channel = cond;
    const Simulator sim(rc.system);
    const std::size_t h_buf = sim.buffer_length(rc.rate_hz);

    std::vector<double> err(n_cells * trials_per_cell, std::numeric_limits<double>::quiet_NaN());
    parallel_for(err.size(), [&](std::size_t idx) {
      const std::size_t cell = idx / trials_per_cell;
      const std::size_t rest = idx % trials_per_cell;
      const std::size_t head = rest % n_head;
      const StaticLocation& loc = sc.locations[cell * n_head + head];
      // Both TX positions need all four links; anything less is an unavailable trial.
      if (!sim.all_links_visible(sim.relative_state(loc.ego, loc.target))) return;
      const CycleRecord rec = sim.simulate_static(loc.ego, loc.target, h_buf,
                                                  trial_seed(rc.seed, idx));
      if (rec.estimate.valid()) err[idx] = rec.error.norm;
    });

    Heatmap hm;
    hm.condition = cond;
    hm.cells.reserve(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
      const StaticLocation& loc = sc.locations[c * n_head];
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t t = 0; t < trials_per_cell; ++t) {
        const double e = err[c * trials_per_cell + t];
        if (std::isnan(e)) continue;
        sum += e;
        ++n;
      }
      HeatmapCell cell;
      cell.x_m = loc.x_m;
      cell.y_m = loc.y_m;
      cell.availability = static_cast<double>(n) / static_cast<double>(trials_per_cell);
      cell.mean_err_m = n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
      hm.cells.push_back(cell);
    }
    out.push_back(std::move(hm));
  }
  return out;
}

double accuracy_radius(const std::vector<HeatmapCell>& cells, double threshold_m, double bin_m) {
  if (!(bin_m > 0.0)) throw Error(ErrorCode::InvalidParams, "bin width must be positive");
  std::map<long, std::vector<double>> bins;
  for (const auto& c : cells) {
    if (std::isnan(c.mean_err_m)) continue;
    const double r = std::hypot(c.x_m, c.y_m);
    bins[static_cast<long>(std::floor(r / bin_m))].push_back(c.mean_err_m);
  }
  double radius = 0.0;
  for (auto& [bin, errs] : bins) {
    const auto mid = errs.begin() + static_cast<std::ptrdiff_t>(errs.size() / 2);
    std::nth_element(errs.begin(), mid, errs.end());
    double median = *mid;
    if (errs.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(errs.begin(), mid));
    }
    if (median > threshold_m) break;
    radius = static_cast<double>(bin + 1) * bin_m;
  }
  return radius;
}

}  // namespace vlcloc
