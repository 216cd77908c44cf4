#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "noum/channel.hpp"
#include "noum/mcs.hpp"
#include "noum/precoder.hpp"

namespace noum::link {

/// MCS triple for the three streams plus the power split.
struct StreamPlan {
  int mcs_c = 0;
  int mcs_1 = 0;
  int mcs_2 = 0;
  precoder::PowerSplit split;

  void validate() const;
};

struct TrialOutcome {
  bool common_ok_u1 = false;
  bool common_ok_u2 = false;
  bool private_ok_u1 = false;
  bool private_ok_u2 = false;
  std::array<double, 2> sinr_common_db{};
  std::array<double, 2> sinr_private_db{};

  bool operator==(const TrialOutcome&) const = default;
};

struct SinrValues {
  std::array<double, 2> common{};   // linear, per user
  std::array<double, 2> privat{};   // linear, per user
};

/// Post-precoding SINRs on the TRUE channels. The private SINR assumes the
/// common stream was cancelled; the common SINR treats both privates as noise.
SinrValues sinr_values(const channel::ChannelPair& pair, const precoder::PrecoderSet& pre,
                       double noise_var);

enum class ReceiverCsi { kGenie, kLsPilot };

struct LinkOptions {
  waveform::FrameConfig frame{};
  ReceiverCsi csi = ReceiverCsi::kGenie;
  bool exact_llr = false;
};

/// One full-waveform trial: encode, precode, superpose, add noise, then
/// SIC-decode at both users. The common stream is cancelled with re-encoded
/// DECODED bits, so a common failure corrupts the private decode.
TrialOutcome run_trial(const channel::ChannelPair& pair, const StreamPlan& plan, double noise_var,
                       std::uint64_t seed, const LinkOptions& opt = {});

struct CalPoint {
  double snr_db = 0.0;
  double p_success = 0.0;
};

struct ThresholdEntry {
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  double width_db = std::numeric_limits<double>::quiet_NaN();
  std::vector<CalPoint> curve;  // measured fine-grid curve, for diagnostics

  bool valid() const;
};

/// Per-MCS SINR decode thresholds measured through the full waveform on a
/// scalar AWGN channel. snr_db is the 50% success point; width_db is half the
/// 10%-90% transition span, so success probability at snr_db + width_db is
/// about 0.9.
struct ThresholdTable {
  int version = 1;
  waveform::FrameConfig frame{};
  int runs_per_point = 0;
  std::uint64_t seed = 0;
  std::array<ThresholdEntry, waveform::kNumMcs> mcs{};

  const ThresholdEntry& entry(int mcs_index) const;
};

/// Threshold-model trial for large sweeps: compares sinr_values against the
/// per-MCS thresholds with a Gaussian jitter of the calibrated width, so
/// success probabilities stay smooth near threshold. A private flag requires
/// the same user's common flag unless the common stream carries no power.
TrialOutcome run_trial_fast(const channel::ChannelPair& pair, const StreamPlan& plan,
                            double noise_var, const ThresholdTable& thresholds,
                            std::uint64_t seed);

inline constexpr std::uint64_t kDefaultCalSeed = 0x706f6c6172ULL;

/// Sweeps AWGN SNR per MCS through the full pipeline and locates the 50%
/// success crossing and transition width. Deterministic for a fixed seed.
/// Throws CalibrationError when a curve fails to cross or is non-monotone
/// beyond statistical tolerance.
ThresholdTable calibrate_thresholds(const waveform::FrameConfig& frame, int runs_per_point,
                                    std::uint64_t seed = kDefaultCalSeed);

/// Single-stream scalar-channel trial at the given SNR, the unit the
/// calibration sweep is built from. Exposed for cross-validation tests.
bool scalar_awgn_trial(int mcs_index, double snr_db, const waveform::FrameConfig& frame,
                       std::uint64_t seed);

/// Model success probability of the fast mode at a scalar SNR.
double fast_success_probability(const ThresholdEntry& entry, double snr_db);

}  // namespace noum::link
