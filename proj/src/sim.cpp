#include "vlcloc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlcloc/error.hpp"
#include "vlcloc/rng.hpp"

namespace vlcloc {

void RunConfig::validate() const {
  system.validate();
  if (!(rate_hz >= 10.0 && rate_hz <= 1000.0)) {
    throw Error(ErrorCode::InvalidParams, "estimation rate must be in [10, 1000] Hz");
  }
  if (repeats == 0) throw Error(ErrorCode::InvalidParams, "repeats must be >= 1");
  const double h = 1.0 / (rate_hz * system.sample_period);
  const double spb = 1.0 / (system.bit_rate * system.sample_period);
  if (std::abs(h - std::round(h)) > 1e-6 * h ||
      std::abs(std::fmod(std::round(h), std::round(spb))) > 0.0) {
    throw Error(ErrorCode::InvalidParams,
                "rate inconsistent with sample period: need a whole number of bits per buffer");
  }
}

namespace {

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(v.size() - 1, lo + 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

template <class Pred>
RunSummary summarize_if(const std::vector<RunRecord>& records, Pred keep) {
  RunSummary s;
  std::vector<double> norms;
  double e1 = 0.0, e2 = 0.0;
  std::array<double, 2> dx{}, dy{};
  for (const auto& r : records) {
    if (!keep(r)) continue;
    ++s.cycles;
    const auto& c = r.cycle;
    if (!c.estimate.valid()) continue;
    ++s.valid_cycles;
    e1 += c.error.e1;
    e2 += c.error.e2;
    norms.push_back(c.error.norm);
    dx[0] += std::abs(c.estimate.p1.x - c.truth.p1.x);
    dx[1] += std::abs(c.estimate.p2.x - c.truth.p2.x);
    dy[0] += std::abs(c.estimate.p1.y - c.truth.p1.y);
    dy[1] += std::abs(c.estimate.p2.y - c.truth.p2.y);
  }
  s.availability = s.cycles ? static_cast<double>(s.valid_cycles) / static_cast<double>(s.cycles)
                            : 0.0;
  const double n = static_cast<double>(s.valid_cycles);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.mean_e1_m = n > 0 ? e1 / n : nan;
  s.mean_e2_m = n > 0 ? e2 / n : nan;
  for (std::size_t j = 0; j < 2; ++j) {
    s.mean_abs_dx_m[j] = n > 0 ? dx[j] / n : nan;
    s.mean_abs_dy_m[j] = n > 0 ? dy[j] / n : nan;
  }
  double total = 0.0;
  for (double v : norms) total += v;
  s.mean_norm_m = n > 0 ? total / n : nan;
  s.p50_norm_m = percentile(norms, 0.5);
  s.p95_norm_m = percentile(norms, 0.95);
  s.max_norm_m = norms.empty() ? nan : *std::max_element(norms.begin(), norms.end());
  return s;
}

}  // namespace

RunSummary summarize(const std::vector<RunRecord>& records) {
  return summarize_if(records, [](const RunRecord&) { return true; });
}

RunSummary summarize_window(const std::vector<RunRecord>& records, double t_begin,
                            double t_end) {
  return summarize_if(records, [=](const RunRecord& r) {
    return r.cycle.t >= t_begin && r.cycle.t < t_end;
  });
}

RunResult run(const RunConfig& config) {
  config.validate();
  if (config.preset == ScenarioPreset::SM4) {
    throw Error(ErrorCode::InvalidParams, "SM4 is a location grid; use sweep_grid");
  }
  const Simulator sim(config.system);
  const Scenario sc = gen_scenario(config.preset, config.scenario);

  RunResult result;
  result.h_buf = sim.buffer_length(config.rate_hz);
  const auto h_buf = static_cast<std::int64_t>(result.h_buf);

  if (sc.trajectory) {
    const ScenarioTrajectory& traj = *sc.trajectory;
    const auto cycles =
        static_cast<std::size_t>(std::floor(config.scenario.duration_s * config.rate_hz + 1e-9));
    result.records.resize(config.repeats * cycles);
    const PoseSource poses = [&traj](double t) { return traj.pose_at(t); };
    parallel_for(config.repeats, [&](std::size_t r) {
      for (std::size_t k = 0; k < cycles; ++k) {
        const std::size_t idx = r * cycles + k;
        RunRecord& rec = result.records[idx];
        rec.repeat = r;
        rec.location = 0;
        rec.cycle = sim.simulate_cycle(poses, static_cast<std::int64_t>(k) * h_buf,
                                       result.h_buf, trial_seed(config.seed, idx),
                                       config.truth_at);
      }
    });
  } else {
    const std::size_t n_loc = sc.locations.size();
    result.records.resize(config.repeats * n_loc);
    parallel_for(result.records.size(), [&](std::size_t idx) {
      const std::size_t r = idx / n_loc;
      const std::size_t k = idx % n_loc;
      const StaticLocation& loc = sc.locations[k];
      const PosePair fixed{loc.ego, loc.target};
      RunRecord& rec = result.records[idx];
      rec.repeat = r;
      rec.location = k;
      rec.cycle = sim.simulate_cycle([fixed](double) { return fixed; },
                                     static_cast<std::int64_t>(k) * h_buf, result.h_buf,
                                     trial_seed(config.seed, idx), config.truth_at);
    });
  }
  result.summary = summarize(result.records);
  return result;
}

}  // namespace vlcloc
