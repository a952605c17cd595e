#include "vlcloc/config_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vlcloc/error.hpp"

namespace vlcloc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

/// Reads keys from one JSON object, rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(path_ + " must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) bad("unknown key " + path_ + "." + k);
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      bad(path_ + "." + key + ": " + e.what());
    }
  }
  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const char* key) const { return j_.at(key); }
  std::string child(const char* key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double deg_field(Section& s, const char* key, double radians) {
  double deg = rad2deg(radians);
  s.get(key, deg);
  return deg2rad(deg);
}

std::string truth_name(TruthReference t) {
  switch (t) {
    case TruthReference::Midpoint: return "midpoint";
    case TruthReference::Available: return "available";
    case TruthReference::Held: return "held";
  }
  return "midpoint";
}

TruthReference parse_truth(const std::string& s) {
  if (s == "midpoint") return TruthReference::Midpoint;
  if (s == "available") return TruthReference::Available;
  if (s == "held") return TruthReference::Held;
  bad("truth_at must be midpoint, available or held");
}

ChannelCondition read_condition(const json& j, const std::string& path, ChannelCondition base) {
  Section s(j, path);
  std::string amb(to_string(base.ambient)), wea(to_string(base.weather));
  s.get("ambient", amb);
  s.get("weather", wea);
  ChannelCondition c = ChannelCondition::make(parse_ambient(amb), parse_weather(wea));
  // Explicit currents/attenuations only survive when the category is unchanged.
  if (c.ambient == base.ambient) c.background_current_a = base.background_current_a;
  if (c.weather == base.weather) c.attenuation_db_per_m = base.attenuation_db_per_m;
  s.get("background_current_a", c.background_current_a);
  s.get("attenuation_db_per_m", c.attenuation_db_per_m);
  return c;
}

json write_condition(const ChannelCondition& c) {
  return {{"ambient", std::string(to_string(c.ambient))},
          {"weather", std::string(to_string(c.weather))},
          {"background_current_a", c.background_current_a},
          {"attenuation_db_per_m", c.attenuation_db_per_m}};
}

void read_tia(const json& j, const std::string& path, TiaConfig& t) {
  Section s(j, path);
  s.get("responsivity_a_per_w", t.responsivity_a_per_w);
  s.get("bandwidth_hz", t.bandwidth_hz);
  s.get("input_capacitance_f", t.input_capacitance_f);
  s.get("feedback_resistance_ohm", t.feedback_resistance_ohm);
  s.get("transconductance_s", t.transconductance_s);
  s.get("channel_noise_factor", t.channel_noise_factor);
  s.get("noise_bandwidth_i2", t.noise_bandwidth_i2);
  s.get("noise_bandwidth_i3", t.noise_bandwidth_i3);
  s.get("temperature_k", t.temperature_k);
  s.get("open_loop_gain", t.open_loop_gain);
  s.get("capacitance_per_quadrant", t.capacitance_per_quadrant);
}

json write_tia(const TiaConfig& t) {
  return {{"responsivity_a_per_w", t.responsivity_a_per_w},
          {"bandwidth_hz", t.bandwidth_hz},
          {"input_capacitance_f", t.input_capacitance_f},
          {"feedback_resistance_ohm", t.feedback_resistance_ohm},
          {"transconductance_s", t.transconductance_s},
          {"channel_noise_factor", t.channel_noise_factor},
          {"noise_bandwidth_i2", t.noise_bandwidth_i2},
          {"noise_bandwidth_i3", t.noise_bandwidth_i3},
          {"temperature_k", t.temperature_k},
          {"open_loop_gain", t.open_loop_gain},
          {"capacitance_per_quadrant", t.capacitance_per_quadrant}};
}

void read_scenario(const json& j, const std::string& path, RunConfig& rc) {
  Section s(j, path);
  ScenarioParams& p = rc.scenario;
  if (s.has("preset")) rc.preset = parse_preset(s.at("preset").get<std::string>());
  s.get("duration_s", p.duration_s);
  s.get("sample_dt_s", p.sample_dt_s);
  if (s.has("sm1")) {
    Section q(s.at("sm1"), s.child("sm1"));
    q.get("ego_speed_mps", p.sm1.ego_speed_mps);
    q.get("initial_gap_m", p.sm1.initial_gap_m);
    q.get("initial_heading_deg", p.sm1.initial_heading_deg);
    q.get("turn_duration_s", p.sm1.turn_duration_s);
    q.get("target_decel_mps2", p.sm1.target_decel_mps2);
  }
  if (s.has("sm2")) {
    Section q(s.at("sm2"), s.child("sm2"));
    q.get("speed_mps", p.sm2.speed_mps);
    q.get("gap_m", p.sm2.gap_m);
    q.get("lane_width_m", p.sm2.lane_width_m);
    q.get("lane_change_s", p.sm2.lane_change_s);
    q.get("exit_decel_mps2", p.sm2.exit_decel_mps2);
  }
  if (s.has("sm3")) {
    Section q(s.at("sm3"), s.child("sm3"));
    q.get("gap_m", p.sm3.gap_m);
    q.get("lateral_max_m", p.sm3.lateral_max_m);
    q.get("locations", p.sm3.locations);
  }
  if (s.has("sm4")) {
    Section q(s.at("sm4"), s.child("sm4"));
    q.get("half_width_m", p.sm4.half_width_m);
    q.get("max_range_m", p.sm4.max_range_m);
    q.get("step_m", p.sm4.step_m);
    q.get("headings_deg", p.sm4.headings_deg);
  }
}

}  // namespace

AppConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  AppConfig cfg;
  RunConfig& rc = cfg.run;
  SystemConfig& sys = rc.system;
  {
    Section s(root, "config");
    if (s.has("scenario")) read_scenario(s.at("scenario"), "scenario", rc);
    s.get("rate_hz", rc.rate_hz);
    s.get("seed", rc.seed);
    s.get("repeats", rc.repeats);
    if (s.has("truth_at")) rc.truth_at = parse_truth(s.at("truth_at").get<std::string>());
    if (s.has("channel")) sys.channel = read_condition(s.at("channel"), "channel", sys.channel);
    if (s.has("conditions")) {
      const json& list = s.at("conditions");
      if (!list.is_array()) bad("conditions must be an array");
      for (std::size_t i = 0; i < list.size(); ++i)
        cfg.conditions.push_back(
            read_condition(list[i], "conditions[" + std::to_string(i) + "]", ChannelCondition{}));
    }
    if (s.has("vehicle")) {
      Section v(s.at("vehicle"), "vehicle");
      v.get("rx_separation_m", sys.vehicle.rx_separation);
      v.get("tx_separation_m", sys.vehicle.tx_separation);
      v.get("body_length_m", sys.vehicle.body_length);
      std::string mount = sys.mount == LightMount::Tail ? "tail" : "head";
      v.get("mount", mount);
      if (mount != "tail" && mount != "head") bad("vehicle.mount must be tail or head");
      sys.mount = mount == "tail" ? LightMount::Tail : LightMount::Head;
    }
    if (s.has("tx")) {
      Section t(s.at("tx"), "tx");
      double power = sys.tx1.optical_power_w;
      int order = sys.tx1.lambertian_order;
      t.get("optical_power_w", power);
      if (t.has("half_power_angle_deg")) {
        order = lambertian_order_from_half_power(deg2rad(t.at("half_power_angle_deg").get<double>()));
      }
      t.get("lambertian_order", order);
      sys.emission_half_angle = deg_field(t, "emission_half_angle_deg", sys.emission_half_angle);
      std::vector<std::vector<double>> tones{{sys.tx1.tone0_hz, sys.tx1.tone1_hz},
                                             {sys.tx2.tone0_hz, sys.tx2.tone1_hz}};
      t.get("tones_hz", tones);
      if (tones.size() != 2 || tones[0].size() != 2 || tones[1].size() != 2) {
        bad("tx.tones_hz must be [[f0, f1], [f0, f1]]");
      }
      for (TxUnit* u : {&sys.tx1, &sys.tx2}) {
        u->optical_power_w = power;
        u->lambertian_order = order;
      }
      sys.tx1.tone0_hz = tones[0][0];
      sys.tx1.tone1_hz = tones[0][1];
      sys.tx2.tone0_hz = tones[1][0];
      sys.tx2.tone1_hz = tones[1][1];
    }
    if (s.has("qrx")) {
      Section q(s.at("qrx"), "qrx");
      q.get("lens_diameter_mm", sys.optics.lens_diameter_mm);
      q.get("refractive_index", sys.optics.refractive_index);
      q.get("qpd_side_mm", sys.optics.qpd_side_mm);
      q.get("lens_qpd_distance_mm", sys.optics.lens_qpd_distance_mm);
      q.get("dead_gap_mm", sys.optics.dead_gap_mm);
      double area_mm2 = sys.aperture_area_m2 * 1e6;
      q.get("aperture_area_mm2", area_mm2);
      sys.aperture_area_m2 = area_mm2 * 1e-6;
      q.get("table_points", sys.table_points);
      if (q.has("tia")) read_tia(q.at("tia"), q.child("tia"), sys.tia);
    }
    if (s.has("signal")) {
      Section g(s.at("signal"), "signal");
      double fs = 1.0 / sys.sample_period;
      g.get("sample_rate_hz", fs);
      if (!(fs > 0.0)) bad("signal.sample_rate_hz must be > 0");
      sys.sample_period = 1.0 / fs;
      g.get("bit_rate_bps", sys.bit_rate);
      g.get("margin_threshold", sys.margin_threshold);
      g.get("bandpass_prefilter", sys.bandpass_prefilter);
      bool noise = sys.noise == NoiseMode::On;
      g.get("noise", noise);
      sys.noise = noise ? NoiseMode::On : NoiseMode::Off;
      g.get("block_duration_s", sys.block_duration_s);
    }
    if (s.has("latency")) {
      Section l(s.at("latency"), "latency");
      l.get("k_alpha", sys.latency.k_alpha);
      l.get("k_beta", sys.latency.k_beta);
      l.get("lookup_ops", sys.latency.lookup_ops);
      l.get("clock_period_s", sys.latency.clock_period_s);
    }
    if (s.has("crlb_map")) {
      Section c(s.at("crlb_map"), "crlb_map");
      c.get("x_min_m", cfg.crlb_map.x_min_m);
      c.get("x_max_m", cfg.crlb_map.x_max_m);
      c.get("y_min_m", cfg.crlb_map.y_min_m);
      c.get("y_max_m", cfg.crlb_map.y_max_m);
      c.get("step_m", cfg.crlb_map.step_m);
      c.get("sigma_source", cfg.crlb_map.sigma_source);
      c.get("sigma_rad", cfg.crlb_map.sigma_rad);
      if (cfg.crlb_map.sigma_source != "analytic" && cfg.crlb_map.sigma_source != "fixed") {
        bad("crlb_map.sigma_source must be analytic or fixed");
      }
    }
    if (s.has("qrx_design")) {
      Section d(s.at("qrx_design"), "qrx_design");
      d.get("points", cfg.qrx_design.points);
      d.get("extra_lens_qpd_distances_mm", cfg.qrx_design.extra_lens_qpd_distances_mm);
    }
  }
  try {
    rc.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

double canonical(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::string dump_config(const AppConfig& cfg) {
  const RunConfig& rc = cfg.run;
  const SystemConfig& sys = rc.system;
  const ScenarioParams& p = rc.scenario;
  json conds = json::array();
  for (const auto& c : cfg.conditions) conds.push_back(write_condition(c));
  json j = {
      {"scenario",
       {{"preset", std::string(to_string(rc.preset))},
        {"duration_s", p.duration_s},
        {"sample_dt_s", p.sample_dt_s},
        {"sm1",
         {{"ego_speed_mps", p.sm1.ego_speed_mps},
          {"initial_gap_m", p.sm1.initial_gap_m},
          {"initial_heading_deg", p.sm1.initial_heading_deg},
          {"turn_duration_s", p.sm1.turn_duration_s},
          {"target_decel_mps2", p.sm1.target_decel_mps2}}},
        {"sm2",
         {{"speed_mps", p.sm2.speed_mps},
          {"gap_m", p.sm2.gap_m},
          {"lane_width_m", p.sm2.lane_width_m},
          {"lane_change_s", p.sm2.lane_change_s},
          {"exit_decel_mps2", p.sm2.exit_decel_mps2}}},
        {"sm3",
         {{"gap_m", p.sm3.gap_m},
          {"lateral_max_m", p.sm3.lateral_max_m},
          {"locations", p.sm3.locations}}},
        {"sm4",
         {{"half_width_m", p.sm4.half_width_m},
          {"max_range_m", p.sm4.max_range_m},
          {"step_m", p.sm4.step_m},
          {"headings_deg", p.sm4.headings_deg}}}}},
      {"rate_hz", rc.rate_hz},
      {"seed", rc.seed},
      {"repeats", rc.repeats},
      {"truth_at", truth_name(rc.truth_at)},
      {"channel", write_condition(sys.channel)},
      {"conditions", conds},
      {"vehicle",
       {{"rx_separation_m", sys.vehicle.rx_separation},
        {"tx_separation_m", sys.vehicle.tx_separation},
        {"body_length_m", sys.vehicle.body_length},
        {"mount", sys.mount == LightMount::Tail ? "tail" : "head"}}},
      {"tx",
       {{"optical_power_w", sys.tx1.optical_power_w},
        {"lambertian_order", sys.tx1.lambertian_order},
        {"emission_half_angle_deg", canonical(rad2deg(sys.emission_half_angle))},
        {"tones_hz", {{sys.tx1.tone0_hz, sys.tx1.tone1_hz}, {sys.tx2.tone0_hz, sys.tx2.tone1_hz}}}}},
      {"qrx",
       {{"lens_diameter_mm", sys.optics.lens_diameter_mm},
        {"refractive_index", sys.optics.refractive_index},
        {"qpd_side_mm", sys.optics.qpd_side_mm},
        {"lens_qpd_distance_mm", sys.optics.lens_qpd_distance_mm},
        {"dead_gap_mm", sys.optics.dead_gap_mm},
        {"aperture_area_mm2", canonical(sys.aperture_area_m2 * 1e6)},
        {"table_points", sys.table_points},
        {"tia", write_tia(sys.tia)}}},
      {"signal",
       {{"sample_rate_hz", canonical(1.0 / sys.sample_period)},
        {"bit_rate_bps", sys.bit_rate},
        {"margin_threshold", sys.margin_threshold},
        {"bandpass_prefilter", sys.bandpass_prefilter},
        {"noise", sys.noise == NoiseMode::On},
        {"block_duration_s", sys.block_duration_s}}},
      {"latency",
       {{"k_alpha", sys.latency.k_alpha},
        {"k_beta", sys.latency.k_beta},
        {"lookup_ops", sys.latency.lookup_ops},
        {"clock_period_s", sys.latency.clock_period_s}}},
      {"crlb_map",
       {{"x_min_m", cfg.crlb_map.x_min_m},
        {"x_max_m", cfg.crlb_map.x_max_m},
        {"y_min_m", cfg.crlb_map.y_min_m},
        {"y_max_m", cfg.crlb_map.y_max_m},
        {"step_m", cfg.crlb_map.step_m},
        {"sigma_source", cfg.crlb_map.sigma_source},
        {"sigma_rad", cfg.crlb_map.sigma_rad}}},
      {"qrx_design",
       {{"points", cfg.qrx_design.points},
        {"extra_lens_qpd_distances_mm", cfg.qrx_design.extra_lens_qpd_distances_mm}}}};
  return j.dump(2) + "\n";
}

std::string config_hash(const AppConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump_config(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vlcloc
