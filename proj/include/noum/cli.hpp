#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "noum/channel.hpp"
#include "noum/link.hpp"
#include "noum/region.hpp"

namespace noum::cli {

/// Fully-resolved experiment description; the executable analog of the
/// paper-style parameter table.
struct ExperimentConfig {
  std::string scenario_preset = "case1";  // empty when scenario.* given explicitly
  channel::ChannelConfig channel;
  double p_total = 1.0;
  region::SweepConfig sweep;
  waveform::FrameConfig phy;
  link::ReceiverCsi csi = link::ReceiverCsi::kGenie;
  std::uint64_t base_seed = 1;
  std::string calibration_file;  // optional threshold-table path
  int calibrate_runs = 200;
  std::string output_dir = "results";

  link::LinkOptions link_options() const { return {phy, csi, false}; }
};

/// Environment variable that overrides base_seed when set.
inline constexpr const char* kSeedEnvVar = "NOUMSIM_BASE_SEED";

/// Parses the flat dotted key-value format. Unknown keys and out-of-range
/// values raise ConfigError naming the key; a preset is applied before any
/// explicit scenario.* overrides. An empty document yields the defaults.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Normalized config document; parse_config(emit_config(c)) reproduces c.
std::string emit_config(const ExperimentConfig& cfg);

struct ExperimentResult {
  region::RateRegion region;
  std::vector<region::SweepRow> rows;
  link::ThresholdTable thresholds;  // calibrated or loaded when mode = fast
  bool used_thresholds = false;
};

/// Builds the scenario, calibrates or loads thresholds when the sweep runs in
/// fast mode, and executes the full region sweep.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes sweep.csv, region.json, bars.csv and effective.conf into the
/// output directory. Writes are atomic (temp file + rename) and all floats
/// are serialized with 6 significant digits.
void emit_results(const ExperimentResult& result, const ExperimentConfig& cfg);

void save_thresholds(const link::ThresholdTable& table, const std::filesystem::path& path);
link::ThresholdTable load_thresholds(const std::filesystem::path& path);

/// Locale-independent 6-significant-digit formatting.
std::string format_sig6(double v);
double round_sig6(double v);

}  // namespace noum::cli
