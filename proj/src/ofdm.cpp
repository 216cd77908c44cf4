#include "noum/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "noum/errors.hpp"

namespace noum::waveform {

namespace {

const std::vector<cplx>& twiddles(std::size_t n, bool inverse) {
  static std::map<std::pair<std::size_t, bool>, std::vector<cplx>> cache;
  auto it = cache.find({n, inverse});
  if (it == cache.end()) {
    std::vector<cplx> tw(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n / 2; ++i) {
      tw[i] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n));
    }
    it = cache.emplace(std::make_pair(n, inverse), std::move(tw)).first;
  }
  return it->second;
}

/// Subcarrier indices in [-n_fft/2, n_fft/2), DC excluded, symmetric around 0.
struct CarrierPlan {
  std::vector<int> data_bins;
  std::vector<int> pilot_bins;
};

CarrierPlan build_plan(const FrameConfig& frame) {
  frame.validate();
  const int n_used = frame.n_data + frame.n_pilot;
  if (n_used >= frame.n_fft) throw ConfigError("frame: no room for guard band");

  std::vector<int> used;
  const int lo = n_used / 2;
  const int hi = n_used - lo;
  for (int s = -lo; s <= -1; ++s) used.push_back(s);
  for (int s = 1; s <= hi; ++s) used.push_back(s);

  std::vector<int> pilot_sc;
  if (frame.n_fft == 64 && frame.n_data == 48 && frame.n_pilot == 4) {
    pilot_sc = {-21, -7, 7, 21};  // 802.11a/g pilot positions
  } else {
    for (int j = 0; j < frame.n_pilot; ++j) {
      const std::size_t off = static_cast<std::size_t>(
          (2 * j + 1) * n_used / (2 * std::max(frame.n_pilot, 1)));
      pilot_sc.push_back(used[off]);
    }
  }

  CarrierPlan plan;
  for (int s : used) {
    const int bin = (s + frame.n_fft) % frame.n_fft;
    if (std::find(pilot_sc.begin(), pilot_sc.end(), s) != pilot_sc.end()) {
      plan.pilot_bins.push_back(bin);
    } else {
      plan.data_bins.push_back(bin);
    }
  }
  if (static_cast<int>(plan.data_bins.size()) != frame.n_data) {
    throw ConfigError("frame: pilot placement does not leave n_data carriers");
  }
  return plan;
}

const CarrierPlan& plan_for(const FrameConfig& frame) {
  // One plan per distinct grid; frames are tiny PODs so the key is the tuple.
  using Key = std::array<int, 4>;
  static std::map<Key, CarrierPlan> cache;
  const Key key{frame.n_fft, frame.n_data, frame.n_pilot, frame.n_guard};
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_plan(frame)).first;
  return it->second;
}

}  // namespace

void fft_unitary(std::span<cplx> x, bool inverse) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fft: size must be a power of two");

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  const auto& tw = twiddles(n, inverse);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = x[i + k];
        const cplx v = x[i + k + len / 2] * tw[k * step];
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
      }
    }
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& c : x) c *= scale;
}

std::array<cplx, 4> default_pilots() {
  return {cplx{1.0, 0.0}, cplx{1.0, 0.0}, cplx{1.0, 0.0}, cplx{-1.0, 0.0}};
}

std::vector<int> data_subcarrier_bins(const FrameConfig& frame) { return plan_for(frame).data_bins; }

std::vector<int> pilot_subcarrier_bins(const FrameConfig& frame) { return plan_for(frame).pilot_bins; }

std::vector<cplx> ofdm_assemble(std::span<const cplx> data_syms, const FrameConfig& frame,
                                const std::array<cplx, 4>& pilot_seq) {
  const auto& plan = plan_for(frame);
  if (data_syms.size() != static_cast<std::size_t>(frame.data_symbols_per_frame())) {
    throw ConfigError("ofdm_assemble: data length mismatch");
  }
  if (frame.n_pilot > 4) throw ConfigError("ofdm_assemble: pilot sequence holds 4 entries");

  const std::size_t n_fft = static_cast<std::size_t>(frame.n_fft);
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(frame.samples_per_frame()));
  std::vector<cplx> freq(n_fft);

  for (int sym = 0; sym < frame.payload_symbols; ++sym) {
    std::fill(freq.begin(), freq.end(), cplx{});
    const std::size_t base = static_cast<std::size_t>(sym) * static_cast<std::size_t>(frame.n_data);
    for (int d = 0; d < frame.n_data; ++d) {
      freq[static_cast<std::size_t>(plan.data_bins[static_cast<std::size_t>(d)])] =
          data_syms[base + static_cast<std::size_t>(d)];
    }
    for (int p = 0; p < frame.n_pilot; ++p) {
      freq[static_cast<std::size_t>(plan.pilot_bins[static_cast<std::size_t>(p)])] =
          pilot_seq[static_cast<std::size_t>(p)];
    }
    fft_unitary(freq, true);
    // cyclic prefix: last cp_len samples lead the symbol
    for (int c = 0; c < frame.cp_len; ++c) {
      out.push_back(freq[n_fft - static_cast<std::size_t>(frame.cp_len) + static_cast<std::size_t>(c)]);
    }
    out.insert(out.end(), freq.begin(), freq.end());
  }
  return out;
}

namespace {

OfdmCells extract_impl(std::span<const cplx> samples, const FrameConfig& frame, bool want_pilots) {
  const auto& plan = plan_for(frame);
  if (samples.size() != static_cast<std::size_t>(frame.samples_per_frame())) {
    throw ConfigError("ofdm_extract: sample length mismatch");
  }

  OfdmCells cells;
  cells.data.reserve(static_cast<std::size_t>(frame.data_symbols_per_frame()));
  if (want_pilots) cells.pilots.resize(static_cast<std::size_t>(frame.payload_symbols));

  const std::size_t sym_len = static_cast<std::size_t>(frame.n_fft + frame.cp_len);
  std::vector<cplx> freq(static_cast<std::size_t>(frame.n_fft));

  for (int sym = 0; sym < frame.payload_symbols; ++sym) {
    const std::size_t start = static_cast<std::size_t>(sym) * sym_len + static_cast<std::size_t>(frame.cp_len);
    std::copy(samples.begin() + static_cast<std::ptrdiff_t>(start),
              samples.begin() + static_cast<std::ptrdiff_t>(start + static_cast<std::size_t>(frame.n_fft)),
              freq.begin());
    fft_unitary(freq, false);
    for (int d = 0; d < frame.n_data; ++d) {
      cells.data.push_back(freq[static_cast<std::size_t>(plan.data_bins[static_cast<std::size_t>(d)])]);
    }
    if (want_pilots) {
      auto& row = cells.pilots[static_cast<std::size_t>(sym)];
      row.reserve(static_cast<std::size_t>(frame.n_pilot));
      for (int p = 0; p < frame.n_pilot; ++p) {
        row.push_back(freq[static_cast<std::size_t>(plan.pilot_bins[static_cast<std::size_t>(p)])]);
      }
    }
  }
  return cells;
}

}  // namespace

std::vector<cplx> ofdm_extract(std::span<const cplx> samples, const FrameConfig& frame) {
  return extract_impl(samples, frame, false).data;
}

OfdmCells ofdm_extract_cells(std::span<const cplx> samples, const FrameConfig& frame) {
  return extract_impl(samples, frame, true);
}

}  // namespace noum::waveform
