#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "noum/types.hpp"

namespace noum::waveform {

/// Gray-mapped square QAM (BPSK for m = 1), unit average constellation
/// energy. Bit groups are MSB-first; the first m/2 bits select the I axis.
/// All-zero bits map to the most-positive point, so QPSK 00 -> (1+j)/sqrt(2).
std::vector<cplx> qam_modulate(std::span<const std::uint8_t> bits, int m);

/// Per-bit LLRs under circular Gaussian noise of variance noise_var.
/// Positive LLR favors bit 0. Max-log by default; exact = true switches to
/// the true log-sum-exp ratio.
std::vector<double> qam_demodulate_llr(std::span<const cplx> symbols, int m, double noise_var,
                                       bool exact = false);

/// The 2^m constellation points indexed by the MSB-first bit label.
std::span<const cplx> qam_constellation(int m);

}  // namespace noum::waveform
