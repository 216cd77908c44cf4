#include "noum/crc.hpp"

namespace noum::waveform {

namespace {
constexpr std::uint32_t kPoly = 0x621;  // x^11+x^10+x^9+x^5+1, low 11 coefficients
constexpr int kLen = 11;
}  // namespace

std::vector<std::uint8_t> crc11(std::span<const std::uint8_t> bits) {
  std::uint32_t reg = 0;
  for (std::uint8_t b : bits) {
    const std::uint32_t top = (reg >> (kLen - 1)) & 1u;
    reg = (reg << 1) & ((1u << kLen) - 1);
    if (top ^ (b & 1u)) reg ^= kPoly;
  }
  std::vector<std::uint8_t> out(kLen);
  for (int i = 0; i < kLen; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((reg >> (kLen - 1 - i)) & 1u);
  }
  return out;
}

bool crc11_check(std::span<const std::uint8_t> bits_with_crc) {
  if (bits_with_crc.size() < static_cast<std::size_t>(kLen)) return false;
  const std::size_t k = bits_with_crc.size() - static_cast<std::size_t>(kLen);
  const auto expect = crc11(bits_with_crc.first(k));
  for (int i = 0; i < kLen; ++i) {
    if (expect[static_cast<std::size_t>(i)] != (bits_with_crc[k + static_cast<std::size_t>(i)] & 1u)) {
      return false;
    }
  }
  return true;
}

}  // namespace noum::waveform
