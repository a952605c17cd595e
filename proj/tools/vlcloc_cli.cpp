#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vlcloc/config_io.hpp"
#include "vlcloc/crlb_map.hpp"
#include "vlcloc/error.hpp"
#include "vlcloc/output.hpp"
#include "vlcloc/rng.hpp"
#include "vlcloc/sweep.hpp"

namespace fs = std::filesystem;
using namespace vlcloc;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> repeats;
  std::string out_dir = "out";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Base RNG seed (overrides the config)");
  cmd->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--repeats", o.repeats, "Independent seeds per run / grid cell");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "csv+svg"}))
      ->capture_default_str();
}

AppConfig resolve(const CommonOptions& o) {
  AppConfig cfg = o.config_path.empty() ? parse_config("{}") : load_config(o.config_path);
  if (o.seed) cfg.run.seed = *o.seed;
  if (o.repeats) cfg.run.repeats = *o.repeats;
  cfg.run.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << text;
}

template <class Fn>
void write_csv(const fs::path& path, Fn&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  writer(out);
}

fs::path prepare(const CommonOptions& o, const AppConfig& cfg) {
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_file(dir / "config.resolved.json", dump_config(cfg));
  return dir;
}

std::string condition_tag(const ChannelCondition& c) {
  return std::string(to_string(c.ambient)) + "_" + std::string(to_string(c.weather));
}

int cmd_qrx_design(const CommonOptions& o) {
  const AppConfig cfg = resolve(o);
  const fs::path dir = prepare(o, cfg);
  const QrxOpticalConfig& base = cfg.run.system.optics;
  const auto curve = qrx_design_curve(base, cfg.qrx_design.points);
  write_csv(dir / "qrx_design.csv", [&](std::ostream& out) { write_qrx_design_csv(out, curve); });
  std::printf("fov_deg %.4f  spot_mm %.4f  bijection %s\n", rad2deg(fov(base)),
              spot_diameter(base), base.satisfies_bijection_guard() ? "ok" : "violated");

  std::vector<PlotSeries> series;
  auto add = [&](const std::string& label, const std::vector<QrxCurvePoint>& c) {
    PlotSeries s{label, {}, {}};
    for (const auto& p : c) {
      s.x.push_back(p.theta_deg);
      s.y.push_back(p.phi);
    }
    series.push_back(std::move(s));
  };
  add("d_X " + format_number(base.lens_qpd_distance_mm) + " mm", curve);
  for (double dx : cfg.qrx_design.extra_lens_qpd_distances_mm) {
    QrxOpticalConfig v = base;
    v.lens_qpd_distance_mm = dx;
    const auto c = qrx_design_curve(v, cfg.qrx_design.points);
    write_csv(dir / ("qrx_design_dx_" + format_number(dx) + "mm.csv"),
              [&](std::ostream& out) { write_qrx_design_csv(out, c); });
    std::printf("d_X %.3f mm: fov_deg %.4f  bijection %s\n", dx, rad2deg(fov(v)),
                v.satisfies_bijection_guard() ? "ok" : "violated");
    add("d_X " + format_number(dx) + " mm", c);
  }
  if (o.format == "csv+svg") {
    write_file(dir / "qrx_design.svg",
               svg_line_plot(series, {"QRX response", "AoA theta (deg)", "Phi", config_hash(cfg)}));
  }
  return 0;
}

int cmd_run(const CommonOptions& o, const std::string& preset, bool dump_buffer) {
  AppConfig cfg = resolve(o);
  if (!preset.empty()) cfg.run.preset = parse_preset(preset);
  const fs::path dir = prepare(o, cfg);
  const RunResult result = run(cfg.run);
  write_csv(dir / "trace.csv", [&](std::ostream& out) { write_trace_csv(out, result); });

  const RunSummary& s = result.summary;
  std::printf("preset %s  rate %.0f Hz  h_buf %zu  cycles %zu  availability %.4f\n",
              std::string(to_string(cfg.run.preset)).c_str(), cfg.run.rate_hz, result.h_buf,
              s.cycles, s.availability);
  std::printf("mean |e| %s m  p50 %s m  p95 %s m  mean |dx1| %s m  mean |dy1| %s m\n",
              format_number(s.mean_norm_m).c_str(), format_number(s.p50_norm_m).c_str(),
              format_number(s.p95_norm_m).c_str(), format_number(s.mean_abs_dx_m[0]).c_str(),
              format_number(s.mean_abs_dy_m[0]).c_str());

  if (dump_buffer && !result.records.empty()) {
    const Simulator sim(cfg.run.system);
    CycleCapture cap;
    const Scenario sc = gen_scenario(cfg.run.preset, cfg.run.scenario);
    PoseSource poses;
    if (sc.trajectory) {
      poses = [&](double t) { return sc.trajectory->pose_at(t); };
    } else {
      const PosePair fixed{sc.locations.front().ego, sc.locations.front().target};
      poses = [fixed](double) { return fixed; };
    }
    sim.simulate_cycle(poses, 0, result.h_buf, trial_seed(cfg.run.seed, 0), cfg.run.truth_at, &cap);
    write_csv(dir / "buffer.csv",
              [&](std::ostream& out) { write_buffer_csv(out, cap.buffers[0], cap.s_hat[0][0]); });
  }

  if (o.format == "csv+svg") {
    std::vector<PlotSeries> series;
    for (std::size_t r = 0; r < cfg.run.repeats && r < 8; ++r) {
      PlotSeries ps{"seed #" + std::to_string(r), {}, {}};
      for (const auto& rec : result.records) {
        if (rec.repeat != r) continue;
        ps.x.push_back(rec.cycle.t);
        ps.y.push_back(rec.cycle.estimate.valid() ? rec.cycle.error.norm : NAN);
      }
      series.push_back(std::move(ps));
    }
    write_file(dir / "trace.svg",
               svg_line_plot(series,
                             {std::string(to_string(cfg.run.preset)) + " localization error",
                              "t (s)", "||e|| (m)", config_hash(cfg)},
                             true));
  }
  return 0;
}

int cmd_crlb_map(const CommonOptions& o) {
  const AppConfig cfg = resolve(o);
  const fs::path dir = prepare(o, cfg);
  const auto rows = crlb_map(cfg.run.system, cfg.crlb_map, cfg.run.rate_hz);
  write_csv(dir / "crlb_map.csv", [&](std::ostream& out) { write_crlb_csv(out, rows); });
  std::size_t finite = 0;
  for (const auto& r : rows) finite += std::isfinite(r.bound_p1_m) ? 1 : 0;
  std::printf("crlb-map: %zu geometries, %zu with a finite bound (sigma %s)\n", rows.size(), finite,
              cfg.crlb_map.sigma_source.c_str());
  if (o.format == "csv+svg") {
    std::vector<GridValue> cells;
    for (const auto& r : rows) cells.push_back({r.x, r.y, r.bound_p1_m});
    write_file(dir / "crlb_map.svg",
               svg_heatmap(cells, {"CRLB on TX1 position (m)", "x of TX1 from QRX1 (m)",
                                   "y of TX1 from QRX1 (m)", config_hash(cfg)}));
  }
  return 0;
}

int cmd_sweep(const CommonOptions& o) {
  AppConfig cfg = resolve(o);
  cfg.run.preset = ScenarioPreset::SM4;
  const fs::path dir = prepare(o, cfg);
  std::vector<ChannelCondition> conds = cfg.conditions;
  if (conds.empty()) conds.push_back(cfg.run.system.channel);
  const auto maps = sweep_grid(cfg.run, conds);
  for (const auto& hm : maps) {
    const std::string tag = condition_tag(hm.condition);
    const std::string name = maps.size() == 1 ? "heatmap" : "heatmap_" + tag;
    write_csv(dir / (name + ".csv"), [&](std::ostream& out) { write_heatmap_csv(out, hm.cells); });
    std::printf("%s: radius(<=0.1 m) %.1f m  radius(<=1 m) %.1f m\n", tag.c_str(),
                accuracy_radius(hm.cells, 0.1), accuracy_radius(hm.cells, 1.0));
    if (o.format == "csv+svg") {
      std::vector<GridValue> cells;
      for (const auto& c : hm.cells) cells.push_back({c.x_m, c.y_m, c.mean_err_m});
      write_file(dir / (name + ".svg"),
                 svg_heatmap(cells, {"SM4 mean ||e|| (m), " + tag, "lateral x (m)",
                                     "longitudinal y (m)", config_hash(cfg)}));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VLC-based vehicle localization simulator"};
  app.require_subcommand(1);

  CommonOptions qrx_opts, run_opts, crlb_opts, sweep_opts;
  auto* qrx = app.add_subcommand("qrx-design", "Sample the QRX response Phi(theta)");
  add_common(qrx, qrx_opts);

  std::string preset;
  bool dump_buffer = false;
  auto* runc = app.add_subcommand("run", "Simulate a scenario and write trace.csv");
  add_common(runc, run_opts);
  runc->add_option("--preset", preset, "SM1, SM2 or SM3 (overrides the config)");
  runc->add_flag("--dump-buffer", dump_buffer, "Also write buffer.csv for the first cycle");

  auto* crlbc = app.add_subcommand("crlb-map", "Cramer-Rao bound over a grid of geometries");
  add_common(crlbc, crlb_opts);

  auto* sweepc = app.add_subcommand("sweep", "SM4 heatmap of mean error and availability");
  add_common(sweepc, sweep_opts);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*qrx) return cmd_qrx_design(qrx_opts);
    if (*runc) return cmd_run(run_opts, preset, dump_buffer);
    if (*crlbc) return cmd_crlb_map(crlb_opts);
    if (*sweepc) return cmd_sweep(sweep_opts);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
