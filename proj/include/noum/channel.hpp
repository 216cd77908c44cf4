#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noum/types.hpp"

namespace noum::channel {

/// Scenario knobs for the two-user MISO channel generator.
struct ChannelConfig {
  int n_tx = 2;
  double rho = 0.3;                // inter-user correlation magnitude, [0, 1]
  double pathloss_delta_db = 0.0;  // extra pathloss of user 2 vs user 1, >= 0
  double snr_db = 20.0;            // per-RX-antenna SNR at user 1, full power
  double csit_error_var = 0.05;    // TX estimation error variance, relative

  void validate() const;
};

/// True channels of both users plus the TX-side estimates.
struct ChannelPair {
  Vec2 h1, h2;
  Vec2 h1_hat, h2_hat;

  bool operator==(const ChannelPair&) const = default;
};

/// Draws a channel realization with exact correlation rho between the user
/// directions and a deterministic pathloss ratio. h1 is isotropic complex
/// Gaussian with unit per-entry power; h2 lies at angle rho from h1 with a
/// seed-dependent phase on the orthogonal component. Estimates equal the
/// true channels until corrupt_csit is applied.
ChannelPair generate_channel_pair(const ChannelConfig& cfg, std::uint64_t seed);

/// Adds complex-Gaussian estimation error to the TX estimates:
/// h_i_hat = h_i + e_i, per-entry error variance csit_error_var * ||h_i||^2 / n_tx.
ChannelPair corrupt_csit(const ChannelPair& pair, const ChannelConfig& cfg, std::uint64_t seed);

/// |h1^H h2| / (||h1|| ||h2||). Throws DegenerateGeometryError on zero-norm input.
double correlation(const ChannelPair& pair);

/// Receiver noise variance for the scenario: ||h1||^2 * p_total / (n_tx * 10^(snr/10)).
double noise_variance(const ChannelPair& pair, const ChannelConfig& cfg, double p_total);

struct Preset {
  std::string name;
  double rho;
  double pathloss_delta_db;
};

/// Measurement-case presets. Correlation rises case1 -> case3; case4 adds
/// 8 dB extra pathloss for user 2 on top of the case3 correlation.
const std::vector<Preset>& presets();

/// Resolves "case1".."case4" onto a config, keeping the other knobs at their
/// defaults. Throws ConfigError for unknown names.
ChannelConfig preset_config(const std::string& name);

}  // namespace noum::channel
