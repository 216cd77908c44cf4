#include "noum/qam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "noum/errors.hpp"

namespace noum::waveform {

namespace {

bool valid_order(int m) { return m == 1 || m == 2 || m == 4 || m == 6 || m == 8; }

std::uint32_t gray_to_binary(std::uint32_t g) {
  g ^= g >> 16;
  g ^= g >> 8;
  g ^= g >> 4;
  g ^= g >> 2;
  g ^= g >> 1;
  return g;
}

std::vector<cplx> build_constellation(int m) {
  std::vector<cplx> pts(std::size_t{1} << m);
  if (m == 1) {
    pts[0] = {1.0, 0.0};
    pts[1] = {-1.0, 0.0};
    return pts;
  }
  const int p = m / 2;
  const int levels = 1 << p;
  const double scale = std::sqrt(3.0 / (2.0 * (std::pow(4.0, p) - 1.0)));
  std::vector<double> amp(static_cast<std::size_t>(levels));
  for (std::uint32_t g = 0; g < static_cast<std::uint32_t>(levels); ++g) {
    const std::uint32_t l = gray_to_binary(g);
    amp[g] = scale * static_cast<double>((levels - 1) - 2 * static_cast<int>(l));
  }
  for (std::uint32_t label = 0; label < pts.size(); ++label) {
    const std::uint32_t gi = label >> p;               // first p bits -> I
    const std::uint32_t gq = label & ((1u << p) - 1);  // last p bits -> Q
    pts[label] = {amp[gi], amp[gq]};
  }
  return pts;
}

const std::vector<cplx>& constellation(int m) {
  static const std::map<int, std::vector<cplx>> tables = [] {
    std::map<int, std::vector<cplx>> t;
    for (int mm : {1, 2, 4, 6, 8}) t.emplace(mm, build_constellation(mm));
    return t;
  }();
  return tables.at(m);
}

}  // namespace

std::span<const cplx> qam_constellation(int m) {
  if (!valid_order(m)) throw ConfigError("qam: unsupported modulation order " + std::to_string(m));
  return constellation(m);
}

std::vector<cplx> qam_modulate(std::span<const std::uint8_t> bits, int m) {
  if (!valid_order(m)) throw ConfigError("qam: unsupported modulation order " + std::to_string(m));
  if (bits.size() % static_cast<std::size_t>(m) != 0) {
    throw ConfigError("qam_modulate: bit count not divisible by m");
  }
  const auto& pts = constellation(m);
  std::vector<cplx> out(bits.size() / static_cast<std::size_t>(m));
  for (std::size_t s = 0; s < out.size(); ++s) {
    std::uint32_t label = 0;
    for (int b = 0; b < m; ++b) {
      label = (label << 1) | (bits[s * static_cast<std::size_t>(m) + static_cast<std::size_t>(b)] & 1u);
    }
    out[s] = pts[label];
  }
  return out;
}

std::vector<double> qam_demodulate_llr(std::span<const cplx> symbols, int m, double noise_var,
                                       bool exact) {
  if (!valid_order(m)) throw ConfigError("qam: unsupported modulation order " + std::to_string(m));
  if (noise_var <= 0.0) throw ConfigError("qam_demodulate_llr: noise_var must be > 0");

  const auto& pts = constellation(m);
  const std::size_t npts = pts.size();
  std::vector<double> llrs(symbols.size() * static_cast<std::size_t>(m));
  std::vector<double> d2(npts);

  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const cplx y = symbols[s];
    for (std::size_t c = 0; c < npts; ++c) d2[c] = std::norm(y - pts[c]);

    for (int b = 0; b < m; ++b) {
      const std::uint32_t mask = 1u << (m - 1 - b);
      double out;
      if (!exact) {
        double best0 = std::numeric_limits<double>::infinity();
        double best1 = best0;
        for (std::size_t c = 0; c < npts; ++c) {
          if (c & mask) {
            best1 = std::min(best1, d2[c]);
          } else {
            best0 = std::min(best0, d2[c]);
          }
        }
        out = (best1 - best0) / noise_var;
      } else {
        // log-sum-exp over each label class, shifted by the per-class minimum
        double min0 = std::numeric_limits<double>::infinity();
        double min1 = min0;
        for (std::size_t c = 0; c < npts; ++c) {
          ((c & mask) ? min1 : min0) = std::min((c & mask) ? min1 : min0, d2[c]);
        }
        double sum0 = 0.0, sum1 = 0.0;
        for (std::size_t c = 0; c < npts; ++c) {
          if (c & mask) {
            sum1 += std::exp(-(d2[c] - min1) / noise_var);
          } else {
            sum0 += std::exp(-(d2[c] - min0) / noise_var);
          }
        }
        out = (min1 - min0) / noise_var + std::log(sum0) - std::log(sum1);
      }
      llrs[s * static_cast<std::size_t>(m) + static_cast<std::size_t>(b)] = out;
    }
  }
  return llrs;
}

}  // namespace noum::waveform
