#include <sstream>
#include <string>

#include "doctest.h"
#include "vlcloc/config_io.hpp"
#include "vlcloc/error.hpp"
#include "vlcloc/output.hpp"

using namespace vlcloc;

namespace {
std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

ErrorCode parse_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("config was accepted: " << text);
  return ErrorCode::InvalidParams;
}
}  // namespace

TEST_CASE("config parsing") {
  const AppConfig defaults = parse_config("{}");
  CHECK(defaults.run.rate_hz == 50.0);
  CHECK(defaults.run.system.sample_period == doctest::Approx(1.0 / 30000.0));

  const auto cfg = parse_config(R"({
    "scenario": {"preset": "SM3", "sm3": {"gap_m": 4.5, "locations": 20}},
    "rate_hz": 100, "seed": 9, "repeats": 3, "truth_at": "held",
    "channel": {"ambient": "day", "weather": "fog"},
    "conditions": [{"ambient": "night", "weather": "rain"}],
    "tx": {"half_power_angle_deg": 20, "tones_hz": [[5000, 6000], [12000, 13000]]},
    "qrx": {"lens_qpd_distance_mm": 0.6, "tia": {"temperature_k": 300}},
    "crlb_map": {"sigma_source": "fixed", "sigma_rad": 0.002}
  })");
  CHECK(cfg.run.preset == ScenarioPreset::SM3);
  CHECK(cfg.run.scenario.sm3.gap_m == 4.5);
  CHECK(cfg.run.scenario.sm3.locations == 20);
  CHECK(cfg.run.rate_hz == 100.0);
  CHECK(cfg.run.seed == 9);
  CHECK(cfg.run.repeats == 3);
  CHECK(cfg.run.truth_at == TruthReference::Held);
  CHECK(cfg.run.system.channel.ambient == Ambient::DayIndirect);
  CHECK(cfg.run.system.channel.background_current_a == doctest::Approx(750e-6));
  CHECK(cfg.run.system.channel.attenuation_db_per_m == doctest::Approx(0.3));
  REQUIRE(cfg.conditions.size() == 1);
  CHECK(cfg.conditions[0].weather == Weather::Rain);
  CHECK(cfg.run.system.tx1.lambertian_order == 11);
  CHECK(cfg.run.system.optics.lens_qpd_distance_mm == 0.6);
  CHECK(cfg.run.system.tia.temperature_k == 300.0);
  CHECK(cfg.crlb_map.sigma_rad == 0.002);
}

TEST_CASE("config round trip and hash") {
  const auto cfg = parse_config(R"({"rate_hz": 250, "channel": {"weather": "rain"}})");
  const std::string text = dump_config(cfg);
  CHECK(dump_config(parse_config(text)) == text);
  CHECK(config_hash(parse_config(text)) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);
  CHECK(config_hash(cfg) != config_hash(parse_config("{}")));
}

TEST_CASE("config rejection") {
  CHECK(parse_error(R"({"rate_hz": 50, "bogus": 1})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"qrx": {"lens_diameter": 7}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"rate_hz": 70})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"channel": {"ambient": "dusk"}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"rate_hz": "fast"})") == ErrorCode::InvalidConfig);
  CHECK(parse_error("{not json") == ErrorCode::InvalidConfig);
}

TEST_CASE("CSV headers and rows") {
  SUBCASE("trace") {
    RunResult r;
    RunRecord rec;
    rec.cycle.t = 0.01;
    rec.cycle.truth.p1 = {0.0, 5.0};
    rec.cycle.truth.p2 = {1.6, 5.0};
    rec.cycle.estimate.p1 = {0.01, 5.02};
    rec.cycle.estimate.p2 = {1.6, 5.0};
    rec.cycle.estimate.valid1 = rec.cycle.estimate.valid2 = true;
    rec.cycle.error = {0.02236, 0.0, 0.02236};
    r.records.push_back(rec);
    rec.cycle.estimate.valid2 = false;
    r.records.push_back(rec);
    std::ostringstream out;
    write_trace_csv(out, r);
    const std::string s = out.str();
    CHECK(first_line(s) ==
          "t_s,x1,y1,x2,y2,x1_hat,y1_hat,x2_hat,y2_hat,e1_m,e2_m,e_norm_m,valid");
    CHECK(s.find(",1\n") != std::string::npos);
    CHECK(s.find(",nan,0\n") != std::string::npos);
  }
  SUBCASE("heatmap") {
    std::ostringstream out;
    write_heatmap_csv(out, {{0.5, 1.0, 0.02, 1.0}, {1.0, 1.0, NAN, 0.0}});
    CHECK(first_line(out.str()) == "x_m,y_m,mean_err_m,availability");
    CHECK(out.str().find("1,1,nan,0") != std::string::npos);
  }
  SUBCASE("crlb map") {
    std::ostringstream out;
    write_crlb_csv(out, {{0.8, 5.0, 1e-3, 0.023, 0.024}});
    CHECK(first_line(out.str()) == "x,y,sigma_used,bound_p1_m,bound_p2_m");
  }
  SUBCASE("qrx design") {
    std::ostringstream out;
    write_qrx_design_csv(out, {{0.0, 0.0}, {30.0, 0.4}});
    CHECK(first_line(out.str()) == "theta_deg,phi");
  }
  SUBCASE("buffer dump") {
    QuadrantBuffer buf(3, 600, 1.0 / 30000.0);
    std::ostringstream out;
    write_buffer_csv(out, buf, {});
    const std::string s = out.str();
    CHECK(first_line(s) == "w,Q_A,Q_B,Q_C,Q_D,s_hat");
    CHECK(s.find("\n600,") != std::string::npos);
    CHECK(s.find("\n602,") != std::string::npos);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("SVG output carries the config hash") {
  const std::string hash = config_hash(parse_config("{}"));
  const std::string line =
      svg_line_plot({{"a", {0, 1, 2}, {1, 2, 4}}}, {"t", "x", "y", hash}, true);
  CHECK(line.rfind("<svg", 0) != std::string::npos);
  CHECK(line.find(hash) != std::string::npos);
  const std::string heat = svg_heatmap({{0, 1, 0.1}, {0.5, 1, NAN}}, {"h", "x", "y", hash});
  CHECK(heat.find(hash) != std::string::npos);
}
