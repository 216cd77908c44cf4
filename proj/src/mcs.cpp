#include "noum/mcs.hpp"

#include <array>
#include <cmath>

#include "noum/errors.hpp"

namespace noum::waveform {

namespace {

const std::array<McsLevel, kNumMcs>& table() {
  static const std::array<McsLevel, kNumMcs> t = {{
      {0, 1, 1, 2, "BPSK"},
      {1, 1, 3, 4, "BPSK"},
      {2, 2, 1, 2, "QPSK"},
      {3, 2, 3, 4, "QPSK"},
      {4, 4, 1, 2, "16QAM"},
      {5, 4, 3, 4, "16QAM"},
      {6, 6, 2, 3, "64QAM"},
      {7, 6, 3, 4, "64QAM"},
      {8, 8, 3, 4, "256QAM"},
      {9, 8, 5, 6, "256QAM"},
  }};
  return t;
}

}  // namespace

const McsLevel& mcs_params(int index) {
  if (index < 0 || index >= kNumMcs) {
    throw ConfigError("invalid MCS index: " + std::to_string(index));
  }
  return table()[static_cast<std::size_t>(index)];
}

void FrameConfig::validate() const {
  if (n_fft <= 0 || (n_fft & (n_fft - 1)) != 0) throw ConfigError("n_fft: must be a power of two");
  if (n_data <= 0 || n_pilot < 0 || n_guard < 0) throw ConfigError("subcarrier counts must be positive");
  if (n_data + n_pilot + n_guard != n_fft) {
    throw ConfigError("n_data + n_pilot + n_guard must equal n_fft");
  }
  if (cp_len < 0 || cp_len > n_fft) throw ConfigError("cp_len: must be in [0, n_fft]");
  if (payload_symbols <= 0) throw ConfigError("payload_symbols: must be positive");
}

int coded_bits_per_frame(const McsLevel& mcs, const FrameConfig& frame) {
  return frame.n_data * mcs.m * frame.payload_symbols;
}

int info_bits_per_frame(const McsLevel& mcs, const FrameConfig& frame) {
  const int n = coded_bits_per_frame(mcs, frame);
  const int k = static_cast<int>(std::llround(static_cast<double>(n) * mcs.code_rate())) - kCrcBits;
  if (k < 1) throw ConfigError("frame too short for MCS " + std::to_string(mcs.index));
  return k;
}

}  // namespace noum::waveform
