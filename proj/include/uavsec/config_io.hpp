#pragma once

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavsec/scenario.hpp"

// Flat key-value scenario files. Recognized keys:
//   alice_xyz, bob_xyz, q0_xyz, qf_xyz, altitude_m, speed_mps, slot_s,
//   num_slots, semi_major_m, beta0_db, pathloss, ye_dbm, pa_max_dbm,
//   pa_avg_dbm, pu_max_dbm, pu_avg_dbm, theta, max_iters
// Missing keys fall back to the reference defaults; unknown or duplicate
// keys are rejected. dB/dBm entries are converted to linear units on load.

namespace uavsec {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number from '" + value + "'");
  }
  if (trim(value.substr(pos)) != "")
    throw ConfigError("config key '" + key + "': trailing junk in '" + value + "'");
  return v;
}

inline int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  return i;
}

inline Vec3 parse_xyz(const std::string& key, const std::string& value) {
  std::array<double, 3> c{};
  std::string item;
  std::stringstream ss(value);
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) throw ConfigError("config key '" + key + "': expected three comma-separated values");
    c[i++] = parse_double(key, trim(item));
  }
  if (i != 3) throw ConfigError("config key '" + key + "': expected three comma-separated values");
  return {c[0], c[1], c[2]};
}

inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    if (kv.count(key)) throw ConfigError("duplicate config key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

}  // namespace detail

/// Parses scenario text. Unrecognized keys are an error; the result is not
/// feasibility-checked here (validate_config reports violations as data).
inline ScenarioConfig parse_config(const std::string& text) {
  auto kv = detail::parse_key_values(text);
  ScenarioConfig cfg;
  // File-unit staging values matching the defaults in ScenarioConfig.
  double beta0_db = 90.0, ye_dbm = 20.0;
  double pa_max_dbm = 36.0, pa_avg_dbm = 30.0;
  double pu_max_dbm = 16.020599913279623, pu_avg_dbm = 10.0;
  bool pa_max_set = false, pa_avg_set = false, pu_max_set = false, pu_avg_set = false;
  bool beta0_set = false, ye_set = false;

  for (const auto& [key, value] : kv) {
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_xyz;
    if (key == "alice_xyz") cfg.alice.position = parse_xyz(key, value);
    else if (key == "bob_xyz") cfg.bob.position = parse_xyz(key, value);
    else if (key == "q0_xyz") cfg.q0 = parse_xyz(key, value);
    else if (key == "qf_xyz") cfg.qf = parse_xyz(key, value);
    else if (key == "altitude_m") cfg.altitude_m = parse_double(key, value);
    else if (key == "speed_mps") cfg.speed_mps = parse_double(key, value);
    else if (key == "slot_s") cfg.slot_s = parse_double(key, value);
    else if (key == "num_slots") cfg.num_slots = parse_int(key, value);
    else if (key == "semi_major_m") cfg.semi_major_m = parse_double(key, value);
    else if (key == "beta0_db") { beta0_db = parse_double(key, value); beta0_set = true; }
    else if (key == "pathloss") cfg.pathloss_exp = parse_double(key, value);
    else if (key == "ye_dbm") { ye_dbm = parse_double(key, value); ye_set = true; }
    else if (key == "pa_max_dbm") { pa_max_dbm = parse_double(key, value); pa_max_set = true; }
    else if (key == "pa_avg_dbm") { pa_avg_dbm = parse_double(key, value); pa_avg_set = true; }
    else if (key == "pu_max_dbm") { pu_max_dbm = parse_double(key, value); pu_max_set = true; }
    else if (key == "pu_avg_dbm") { pu_avg_dbm = parse_double(key, value); pu_avg_set = true; }
    else if (key == "theta") cfg.theta = parse_double(key, value);
    else if (key == "max_iters") cfg.max_iters = parse_int(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }

  if (beta0_set) cfg.beta0 = db_to_linear(beta0_db);
  if (ye_set) cfg.ye = dbm_to_watts(ye_dbm);
  if (pa_max_set) cfg.pa_max_w = dbm_to_watts(pa_max_dbm);
  if (pa_avg_set) cfg.pa_avg_w = dbm_to_watts(pa_avg_dbm);
  if (pu_max_set) cfg.pu_max_w = dbm_to_watts(pu_max_dbm);
  if (pu_avg_set) cfg.pu_avg_w = dbm_to_watts(pu_avg_dbm);
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

enum class SweepParameter { ye, altitude, speed, snr_beta0, flight_time, pa_avg };

inline const char* sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::ye: return "ye";
    case SweepParameter::altitude: return "altitude";
    case SweepParameter::speed: return "speed";
    case SweepParameter::snr_beta0: return "snr_beta0";
    case SweepParameter::flight_time: return "flight_time";
    case SweepParameter::pa_avg: return "pa_avg";
  }
  return "?";
}

/// One-parameter experiment sweep over a base scenario.
/// Value units: ye is linear envelope power, altitude in meters, speed in
/// m/s, snr_beta0 in dB, flight_time in seconds, pa_avg in watts.
struct SweepSpec {
  SweepParameter parameter = SweepParameter::ye;
  std::vector<double> values;
  ScenarioConfig base;
};

/// Sweep files carry `parameter`, `values` (comma-separated), and optionally
/// any scenario key to override the defaults of the base config.
inline SweepSpec parse_sweep_spec(const std::string& text) {
  auto kv = detail::parse_key_values(text);
  SweepSpec spec;
  const auto param_it = kv.find("parameter");
  if (param_it == kv.end()) throw ConfigError("sweep spec is missing the 'parameter' key");
  const std::string pname = param_it->second;
  if (pname == "ye") spec.parameter = SweepParameter::ye;
  else if (pname == "altitude") spec.parameter = SweepParameter::altitude;
  else if (pname == "speed") spec.parameter = SweepParameter::speed;
  else if (pname == "snr_beta0") spec.parameter = SweepParameter::snr_beta0;
  else if (pname == "flight_time") spec.parameter = SweepParameter::flight_time;
  else if (pname == "pa_avg") spec.parameter = SweepParameter::pa_avg;
  else throw ConfigError("unknown sweep parameter '" + pname + "'");

  const auto values_it = kv.find("values");
  if (values_it == kv.end()) throw ConfigError("sweep spec is missing the 'values' key");
  std::stringstream ss(values_it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    spec.values.push_back(detail::parse_double("values", detail::trim(item)));
  }
  if (spec.values.empty()) throw ConfigError("sweep spec has an empty values list");

  std::string config_text;
  for (const auto& [key, value] : kv) {
    if (key == "parameter" || key == "values") continue;
    config_text += key + " = " + value + "\n";
  }
  spec.base = parse_config(config_text);
  return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep spec '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_spec(buf.str());
}

/// Applies one sweep value to a copy of the base scenario.
inline ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepParameter p, double value) {
  ScenarioConfig cfg = base;
  switch (p) {
    case SweepParameter::ye:
      cfg.ye = value;
      break;
    case SweepParameter::altitude:
      cfg.altitude_m = value;
      cfg.q0.z = value;
      cfg.qf.z = value;
      break;
    case SweepParameter::speed:
      cfg.speed_mps = value;
      break;
    case SweepParameter::snr_beta0:
      cfg.beta0 = db_to_linear(value);
      break;
    case SweepParameter::flight_time:
      cfg.num_slots = static_cast<int>(std::lround(value / cfg.slot_s));
      break;
    case SweepParameter::pa_avg:
      cfg.pa_avg_w = value;
      break;
  }
  return cfg;
}

}  // namespace uavsec
