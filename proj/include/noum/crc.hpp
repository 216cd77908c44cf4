#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace noum::waveform {

/// CRC-11, polynomial x^11 + x^10 + x^9 + x^5 + 1, zero initial state.
/// Zero init keeps the all-zero message self-consistent, which the linear
/// polar code relies on.
std::vector<std::uint8_t> crc11(std::span<const std::uint8_t> bits);

/// True when the last 11 bits equal the CRC of the preceding bits.
bool crc11_check(std::span<const std::uint8_t> bits_with_crc);

}  // namespace noum::waveform
