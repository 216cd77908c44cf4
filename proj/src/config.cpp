#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "noum/cli.hpp"
#include "noum/errors.hpp"

namespace noum::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError(key + ": not a number: '" + value + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError(key + ": not an integer: '" + value + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError(key + ": not an unsigned integer: '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true/false: '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) parts.push_back(t);
  }
  return parts;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second) throw ConfigError(key + ": duplicate key");
  }

  ExperimentConfig cfg;

  // the preset fixes the channel baseline before explicit overrides
  bool preset_given = false;
  if (auto it = kv.find("scenario.preset"); it != kv.end()) {
    cfg.channel = channel::preset_config(it->second);
    cfg.scenario_preset = it->second;
    preset_given = true;
    kv.erase(it);
  }

  bool explicit_scenario = false;
  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("scenario.rho")) {
    cfg.channel.rho = parse_double("scenario.rho", *v);
    explicit_scenario = true;
  }
  if (auto v = take("scenario.pathloss_delta_db")) {
    cfg.channel.pathloss_delta_db = parse_double("scenario.pathloss_delta_db", *v);
    explicit_scenario = true;
  }
  if (auto v = take("scenario.snr_db")) cfg.channel.snr_db = parse_double("scenario.snr_db", *v);
  if (auto v = take("scenario.csit_error_var")) {
    cfg.channel.csit_error_var = parse_double("scenario.csit_error_var", *v);
  }
  if (auto v = take("scenario.n_tx")) {
    cfg.channel.n_tx = static_cast<int>(parse_int("scenario.n_tx", *v));
  }
  if (auto v = take("scenario.p_total")) {
    cfg.p_total = parse_double("scenario.p_total", *v);
    if (cfg.p_total <= 0.0) throw ConfigError("scenario.p_total: must be > 0");
  }
  if (explicit_scenario && !preset_given) {
    // rho/pathloss given directly: the config no longer tracks a preset
    cfg.scenario_preset.clear();
  }

  try {
    cfg.channel.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("scenario.") + e.what());
  }

  if (auto v = take("sweep.t_grid")) {
    cfg.sweep.t_grid.clear();
    for (const auto& item : split_list(*v)) {
      cfg.sweep.t_grid.push_back(parse_double("sweep.t_grid", item));
    }
  }
  if (auto v = take("sweep.runs")) cfg.sweep.runs = static_cast<int>(parse_int("sweep.runs", *v));
  if (auto v = take("sweep.mcs_indices")) {
    cfg.sweep.mcs_indices.clear();
    for (const auto& item : split_list(*v)) {
      cfg.sweep.mcs_indices.push_back(static_cast<int>(parse_int("sweep.mcs_indices", item)));
    }
    std::sort(cfg.sweep.mcs_indices.begin(), cfg.sweep.mcs_indices.end());
    cfg.sweep.mcs_indices.erase(
        std::unique(cfg.sweep.mcs_indices.begin(), cfg.sweep.mcs_indices.end()),
        cfg.sweep.mcs_indices.end());
  }
  if (auto v = take("sweep.mode")) {
    if (*v == "full") {
      cfg.sweep.mode = region::Mode::kFull;
    } else if (*v == "fast") {
      cfg.sweep.mode = region::Mode::kFast;
    } else {
      throw ConfigError("sweep.mode: expected full or fast: '" + *v + "'");
    }
  }
  if (auto v = take("sweep.ensemble")) cfg.sweep.ensemble = parse_bool("sweep.ensemble", *v);
  try {
    cfg.sweep.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what());
  }

  if (auto v = take("phy.n_fft")) cfg.phy.n_fft = static_cast<int>(parse_int("phy.n_fft", *v));
  if (auto v = take("phy.n_data")) cfg.phy.n_data = static_cast<int>(parse_int("phy.n_data", *v));
  if (auto v = take("phy.n_pilot")) cfg.phy.n_pilot = static_cast<int>(parse_int("phy.n_pilot", *v));
  if (auto v = take("phy.n_guard")) cfg.phy.n_guard = static_cast<int>(parse_int("phy.n_guard", *v));
  if (auto v = take("phy.cp_len")) cfg.phy.cp_len = static_cast<int>(parse_int("phy.cp_len", *v));
  if (auto v = take("phy.payload_symbols")) {
    cfg.phy.payload_symbols = static_cast<int>(parse_int("phy.payload_symbols", *v));
  }
  try {
    cfg.phy.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("phy.") + e.what());
  }

  if (auto v = take("link.csi")) {
    if (*v == "genie") {
      cfg.csi = link::ReceiverCsi::kGenie;
    } else if (*v == "ls") {
      cfg.csi = link::ReceiverCsi::kLsPilot;
    } else {
      throw ConfigError("link.csi: expected genie or ls: '" + *v + "'");
    }
  }
  if (auto v = take("link.calibration_file")) cfg.calibration_file = *v;
  if (auto v = take("calibrate.runs_per_point")) {
    cfg.calibrate_runs = static_cast<int>(parse_int("calibrate.runs_per_point", *v));
    if (cfg.calibrate_runs < 100) throw ConfigError("calibrate.runs_per_point: must be >= 100");
  }
  if (auto v = take("base_seed")) cfg.base_seed = parse_u64("base_seed", *v);
  if (auto v = take("output.dir")) cfg.output_dir = *v;

  if (!kv.empty()) throw ConfigError("unknown config key: " + kv.begin()->first);

  if (const char* env = std::getenv(kSeedEnvVar)) {
    cfg.base_seed = parse_u64(kSeedEnvVar, env);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# effective configuration\n";
  if (!cfg.scenario_preset.empty()) out << "scenario.preset = " << cfg.scenario_preset << "\n";
  out << "scenario.rho = " << format_sig6(cfg.channel.rho) << "\n";
  out << "scenario.pathloss_delta_db = " << format_sig6(cfg.channel.pathloss_delta_db) << "\n";
  out << "scenario.snr_db = " << format_sig6(cfg.channel.snr_db) << "\n";
  out << "scenario.csit_error_var = " << format_sig6(cfg.channel.csit_error_var) << "\n";
  out << "scenario.n_tx = " << cfg.channel.n_tx << "\n";
  out << "scenario.p_total = " << format_sig6(cfg.p_total) << "\n";
  out << "sweep.t_grid = ";
  for (std::size_t i = 0; i < cfg.sweep.t_grid.size(); ++i) {
    if (i) out << ",";
    out << format_sig6(cfg.sweep.t_grid[i]);
  }
  out << "\n";
  out << "sweep.runs = " << cfg.sweep.runs << "\n";
  out << "sweep.mcs_indices = ";
  for (std::size_t i = 0; i < cfg.sweep.mcs_indices.size(); ++i) {
    if (i) out << ",";
    out << cfg.sweep.mcs_indices[i];
  }
  out << "\n";
  out << "sweep.mode = " << (cfg.sweep.mode == region::Mode::kFast ? "fast" : "full") << "\n";
  out << "sweep.ensemble = " << (cfg.sweep.ensemble ? "true" : "false") << "\n";
  out << "phy.n_fft = " << cfg.phy.n_fft << "\n";
  out << "phy.n_data = " << cfg.phy.n_data << "\n";
  out << "phy.n_pilot = " << cfg.phy.n_pilot << "\n";
  out << "phy.n_guard = " << cfg.phy.n_guard << "\n";
  out << "phy.cp_len = " << cfg.phy.cp_len << "\n";
  out << "phy.payload_symbols = " << cfg.phy.payload_symbols << "\n";
  out << "link.csi = " << (cfg.csi == link::ReceiverCsi::kLsPilot ? "ls" : "genie") << "\n";
  if (!cfg.calibration_file.empty()) out << "link.calibration_file = " << cfg.calibration_file << "\n";
  out << "calibrate.runs_per_point = " << cfg.calibrate_runs << "\n";
  out << "base_seed = " << cfg.base_seed << "\n";
  out << "output.dir = " << cfg.output_dir << "\n";
  return out.str();
}

std::string format_sig6(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

double round_sig6(double v) {
  const std::string s = format_sig6(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace noum::cli
