#pragma once

#include <string>

namespace noum::waveform {

inline constexpr double kBandwidthMhz = 12.0;
inline constexpr int kCrcBits = 11;

/// One link-adaptation level: modulation order and code rate, kept as an
/// exact rational so payload sizes and peak throughputs stay integral.
struct McsLevel {
  int index = 0;
  int m = 1;            // bits per symbol
  int rate_num = 1;     // code rate numerator
  int rate_den = 2;     // code rate denominator
  std::string label;    // modulation name

  double code_rate() const { return static_cast<double>(rate_num) / rate_den; }

  /// Peak spectral efficiency m*r in bits/s/Hz.
  double spectral_efficiency() const { return static_cast<double>(m * rate_num) / rate_den; }

  /// Peak throughput B*m*r in Mbps; exact for every table row.
  double max_rate_mbps() const {
    return static_cast<double>(12 * m * rate_num) / rate_den;
  }
};

inline constexpr int kNumMcs = 10;

/// Row lookup; throws ConfigError for an out-of-range index.
const McsLevel& mcs_params(int index);

struct FrameConfig {
  int n_fft = 64;
  int n_data = 48;
  int n_pilot = 4;
  int n_guard = 12;
  int cp_len = 16;
  int payload_symbols = 50;

  void validate() const;

  int data_symbols_per_frame() const { return n_data * payload_symbols; }
  int samples_per_frame() const { return (n_fft + cp_len) * payload_symbols; }
};

/// Coded block length for a stream at this MCS: n_data * m * payload_symbols.
int coded_bits_per_frame(const McsLevel& mcs, const FrameConfig& frame);

/// Info payload size: round(n*r) - crc_len.
int info_bits_per_frame(const McsLevel& mcs, const FrameConfig& frame);

}  // namespace noum::waveform
