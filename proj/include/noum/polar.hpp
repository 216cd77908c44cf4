#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "noum/mcs.hpp"

namespace noum::waveform {

/// CRC-aided polar code. The mother code is the smallest power of two >= n,
/// shortened to n: coded positions n..N-1 are never transmitted (the decoder
/// treats them as known zeros) and the matching input positions are frozen,
/// which forces those coded bits to zero. Construction uses Gaussian
///-approximation density evolution at a fixed design LLR mean.
class PolarCodec {
 public:
  PolarCodec(int n_coded, int k_info, double design_llr_mean, int list_size = 8,
             int crc_bits = kCrcBits);

  int n() const { return n_; }
  int k() const { return k_; }
  int mother_n() const { return big_n_; }
  int list_size() const { return list_; }

  /// info -> n coded bits; the CRC is appended to the info bits before the
  /// polar transform.
  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;

  struct DecodeResult {
    std::vector<std::uint8_t> bits;  // k info bits, CRC stripped
    bool crc_ok = false;
  };

  /// CRC-aided successive-cancellation list decode. Positive LLR favors
  /// bit 0. Failure is reported in crc_ok, never thrown.
  DecodeResult decode(std::span<const double> llrs) const;

 private:
  int n_, k_, crc_, list_, big_n_, stages_;
  std::vector<int> info_pos_;          // ascending, size k_ + crc_
  std::vector<std::uint8_t> is_info_;  // size big_n_
};

/// Design LLR mean for a standalone (n, k) code, from the code rate.
double default_design_llr_mean(int n, int k, int crc_bits = kCrcBits);

/// Per-MCS design point: the GA input mean at the expected operating Es/N0,
/// split evenly over the m bits of a symbol.
double mcs_design_llr_mean(const McsLevel& mcs);

/// Shared immutable codec for a stream at this MCS and frame; built on first
/// use and cached.
const PolarCodec& codec_for_mcs(int mcs_index, const FrameConfig& frame);

/// Free-function forms over a cached default-design codec.
std::vector<std::uint8_t> polar_encode(std::span<const std::uint8_t> info, int n, int k);
std::pair<std::vector<std::uint8_t>, bool> polar_decode(std::span<const double> llrs, int n, int k);

}  // namespace noum::waveform
