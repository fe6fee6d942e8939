#include "vrsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vrsim {

namespace {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

[[noreturn]] void bad_field(const std::string& path, const char* why) {
  throw std::invalid_argument("config: field '" + path + "' " + why);
}

class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) bad_field(path_, "must be an object");
  }

  ~Section() = default;

  void get(const char* key, double& out) {
    if (auto it = fetch(key); it != node_.end()) {
      if (!it->is_number()) bad_field(path_ + key, "must be a number");
      out = it->get<double>();
    }
  }
  void get(const char* key, int& out) {
    if (auto it = fetch(key); it != node_.end()) {
      if (!it->is_number_integer()) bad_field(path_ + key, "must be an integer");
      out = it->get<int>();
    }
  }
  void get(const char* key, long& out) {
    if (auto it = fetch(key); it != node_.end()) {
      if (!it->is_number_integer()) bad_field(path_ + key, "must be an integer");
      out = it->get<long>();
    }
  }
  void get(const char* key, std::uint64_t& out) {
    if (auto it = fetch(key); it != node_.end()) {
      if (!it->is_number_unsigned()) bad_field(path_ + key, "must be a non-negative integer");
      out = it->get<std::uint64_t>();
    }
  }
  void get(const char* key, bool& out) {
    if (auto it = fetch(key); it != node_.end()) {
      if (!it->is_boolean()) bad_field(path_ + key, "must be a boolean");
      out = it->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (auto it = fetch(key); it != node_.end()) {
      if (!it->is_string()) bad_field(path_ + key, "must be a string");
      out = it->get<std::string>();
    }
  }

  const json* child(const char* key) {
    auto it = fetch(key);
    return it != node_.end() ? &*it : nullptr;
  }

  void reject_unknown() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (seen_.find(',' + it.key() + ',') == std::string::npos)
        bad_field(path_ + it.key(), "is not a recognized setting");
    }
  }

 private:
  json::const_iterator fetch(const char* key) {
    seen_ += ',';
    seen_ += key;
    seen_ += ',';
    return node_.find(key);
  }
  const json& node_;
  std::string path_;
  std::string seen_;
};

void load_scenario(const json& node, ScenarioParams& p) {
  Section s(node, "scenario.");
  s.get("rows", p.rows);
  s.get("cols", p.cols);
  s.get("pod_side_m", p.pod_side_m);
  s.get("height_m", p.height_m);
  s.get("head_height_m", p.head_height_m);
  s.get("blocker_diameter_m", p.blocker_diameter_m);
  s.get("max_speed_mps", p.max_speed_mps);
  s.get("max_turn_rad_s", p.max_turn_rad_s);
  s.get("n_players", p.n_players);
  s.get("n_mmaps", p.n_mmaps);
  double tx_dbm = linear_to_db(p.tx_power_w * 1e3);
  s.get("tx_power_dbm", tx_dbm);
  p.tx_power_w = db_to_linear(tx_dbm) * 1e-3;
  double sector_deg = p.sector_beamwidth_rad * 180.0 / std::numbers::pi;
  double beam_deg = p.beam_beamwidth_rad * 180.0 / std::numbers::pi;
  s.get("sector_beamwidth_deg", sector_deg);
  s.get("beam_beamwidth_deg", beam_deg);
  p.sector_beamwidth_rad = sector_deg * std::numbers::pi / 180.0;
  p.beam_beamwidth_rad = beam_deg * std::numbers::pi / 180.0;
  s.reject_unknown();
}

void load_channel(const json& node, ChannelParams& p) {
  Section s(node, "channel.");
  s.get("alpha_los", p.alpha_los);
  s.get("alpha_nlos", p.alpha_nlos);
  s.get("m_los", p.m_los);
  s.get("m_nlos", p.m_nlos);
  s.get("ref_pathloss", p.ref_pathloss);
  double sidelobe_db = linear_to_db(p.sidelobe_gain);
  s.get("sidelobe_gain_db", sidelobe_db);
  p.sidelobe_gain = db_to_linear(sidelobe_db);
  s.get("bandwidth_hz", p.bandwidth_hz);
  s.get("noise_density_w_hz", p.noise_density_w_hz);
  double pilot_us = p.pilot_time_s * 1e6;
  s.get("pilot_time_us", pilot_us);
  p.pilot_time_s = pilot_us * 1e-6;
  s.reject_unknown();
}

void load_workload(const json& node, WorkloadParams& p) {
  Section s(node, "workload.");
  s.get("frames_per_player", p.frames_per_player);
  s.get("mean_hd_bits", p.mean_hd_bits);
  s.get("lq_ratio", p.lq_ratio);
  s.get("n_actions", p.n_actions);
  s.get("zipf_exponent", p.zipf_exponent);
  s.get("impulse_rate_per_s", p.impulse_rate_per_s);
  s.get("impact_prob", p.impact_prob);
  s.reject_unknown();
}

void load_fog(const json& node, FogConfig& p) {
  Section s(node, "fog.");
  s.get("n_servers", p.n_servers);
  s.get("cycles_per_s", p.cycles_per_s);
  s.get("cycles_per_bit", p.cycles_per_bit);
  s.get("cache_capacity", p.cache_capacity);
  double window_ms = p.window_s * 1e3;
  double edge_ms = p.edge_processing_s * 1e3;
  s.get("window_ms", window_ms);
  s.get("edge_processing_ms", edge_ms);
  p.window_s = window_ms * 1e-3;
  p.edge_processing_s = edge_ms * 1e-3;
  s.reject_unknown();
}

void load_matching(const json& node, MatchingParams& p) {
  Section s(node, "matching.");
  double thr_db = linear_to_db(p.sinr_threshold_linear);
  s.get("sinr_threshold_db", thr_db);
  p.sinr_threshold_linear = db_to_linear(thr_db);
  s.reject_unknown();
}

}  // namespace

RunConfig load_config(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  RunConfig cfg;
  // strip UTF-8 BOM, treat whitespace-only input as all defaults
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;

  json root;
  try {
    root = json::parse(text, nullptr, true, /*allow comments*/ true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  Section top(root, "");
  std::string scheme = to_string(cfg.scheme);
  top.get("scheme", scheme);
  cfg.scheme = scheme_from_string(scheme);

  double d_th_ms = cfg.d_th_s * 1e3;
  double slot_ms = cfg.slot_s * 1e3;
  double epoch_ms = cfg.epoch_s * 1e3;
  top.get("d_th_ms", d_th_ms);
  top.get("slot_ms", slot_ms);
  top.get("epoch_ms", epoch_ms);
  cfg.d_th_s = d_th_ms * 1e-3;
  cfg.slot_s = slot_ms * 1e-3;
  cfg.epoch_s = epoch_ms * 1e-3;
  top.get("epsilon", cfg.epsilon);
  top.get("total_slots", cfg.total_slots);
  top.get("seed", cfg.seed);

  if (const json* n = top.child("scenario")) load_scenario(*n, cfg.scenario);
  if (const json* n = top.child("channel")) load_channel(*n, cfg.channel);
  if (const json* n = top.child("workload")) load_workload(*n, cfg.workload);
  if (const json* n = top.child("fog")) load_fog(*n, cfg.fog);
  if (const json* n = top.child("matching")) load_matching(*n, cfg.matching);
  top.reject_unknown();

  // derived couplings kept implicit in the file
  cfg.workload.frame_cadence_slots = cfg.epoch_slots();
  cfg.channel.slot_duration_s = cfg.slot_s;
  cfg.fog.window_s = cfg.epoch_s;

  cfg.validate();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  return load_config(in);
}

void save_config(const RunConfig& cfg, std::ostream& out) {
  json root;
  root["scheme"] = to_string(cfg.scheme);
  root["d_th_ms"] = cfg.d_th_s * 1e3;
  root["epsilon"] = cfg.epsilon;
  root["slot_ms"] = cfg.slot_s * 1e3;
  root["epoch_ms"] = cfg.epoch_s * 1e3;
  root["total_slots"] = cfg.total_slots;
  root["seed"] = cfg.seed;

  json& sc = root["scenario"];
  sc["rows"] = cfg.scenario.rows;
  sc["cols"] = cfg.scenario.cols;
  sc["pod_side_m"] = cfg.scenario.pod_side_m;
  sc["height_m"] = cfg.scenario.height_m;
  sc["head_height_m"] = cfg.scenario.head_height_m;
  sc["blocker_diameter_m"] = cfg.scenario.blocker_diameter_m;
  sc["max_speed_mps"] = cfg.scenario.max_speed_mps;
  sc["max_turn_rad_s"] = cfg.scenario.max_turn_rad_s;
  sc["n_players"] = cfg.scenario.n_players;
  sc["n_mmaps"] = cfg.scenario.n_mmaps;
  sc["tx_power_dbm"] = linear_to_db(cfg.scenario.tx_power_w * 1e3);
  sc["sector_beamwidth_deg"] = cfg.scenario.sector_beamwidth_rad * 180.0 / std::numbers::pi;
  sc["beam_beamwidth_deg"] = cfg.scenario.beam_beamwidth_rad * 180.0 / std::numbers::pi;

  json& ch = root["channel"];
  ch["alpha_los"] = cfg.channel.alpha_los;
  ch["alpha_nlos"] = cfg.channel.alpha_nlos;
  ch["m_los"] = cfg.channel.m_los;
  ch["m_nlos"] = cfg.channel.m_nlos;
  ch["ref_pathloss"] = cfg.channel.ref_pathloss;
  ch["sidelobe_gain_db"] = linear_to_db(cfg.channel.sidelobe_gain);
  ch["bandwidth_hz"] = cfg.channel.bandwidth_hz;
  ch["noise_density_w_hz"] = cfg.channel.noise_density_w_hz;
  ch["pilot_time_us"] = cfg.channel.pilot_time_s * 1e6;

  json& wl = root["workload"];
  wl["frames_per_player"] = cfg.workload.frames_per_player;
  wl["mean_hd_bits"] = cfg.workload.mean_hd_bits;
  wl["lq_ratio"] = cfg.workload.lq_ratio;
  wl["n_actions"] = cfg.workload.n_actions;
  wl["zipf_exponent"] = cfg.workload.zipf_exponent;
  wl["impulse_rate_per_s"] = cfg.workload.impulse_rate_per_s;
  wl["impact_prob"] = cfg.workload.impact_prob;

  json& fg = root["fog"];
  fg["n_servers"] = cfg.fog.n_servers;
  fg["cycles_per_s"] = cfg.fog.cycles_per_s;
  fg["cycles_per_bit"] = cfg.fog.cycles_per_bit;
  fg["cache_capacity"] = cfg.fog.cache_capacity;
  fg["window_ms"] = cfg.fog.window_s * 1e3;
  fg["edge_processing_ms"] = cfg.fog.edge_processing_s * 1e3;

  root["matching"]["sinr_threshold_db"] = linear_to_db(cfg.matching.sinr_threshold_linear);

  out << root.dump(2) << '\n';
}

}  // namespace vrsim
