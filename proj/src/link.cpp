#include "noum/link.hpp"

#include <cmath>
#include <numbers>

#include "noum/errors.hpp"
#include "noum/ofdm.hpp"
#include "noum/polar.hpp"
#include "noum/qam.hpp"
#include "noum/rng.hpp"

namespace noum::link {

namespace {

// seed-stream tags
constexpr std::uint64_t kPayloadTag = 1;
constexpr std::uint64_t kNoiseTag = 2;
constexpr std::uint64_t kJitterTag = 3;

constexpr double kMinNoiseVar = 1e-30;

/// Per-stream pilot sequences: Walsh masks over the 4 pilot tones keep the
/// three superposed streams separable for the LS estimator on a flat channel.
std::array<cplx, 4> stream_pilots(int stream) {
  static constexpr double kWalsh[3][4] = {
      {1, 1, 1, 1},
      {1, -1, 1, -1},
      {1, 1, -1, -1},
  };
  const auto base = waveform::default_pilots();
  std::array<cplx, 4> out{};
  for (int p = 0; p < 4; ++p) out[static_cast<std::size_t>(p)] = kWalsh[stream][p] * base[static_cast<std::size_t>(p)];
  return out;
}

std::vector<std::uint8_t> random_bits(int count, Rng& rng) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(count));
  for (auto& b : bits) b = rng.bit() ? 1 : 0;
  return bits;
}

double gauss_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// z value of the 90% quantile; width_db = half the 10-90 span = z90 * sigma
constexpr double kZ90 = 1.2815515655446004;

}  // namespace

void StreamPlan::validate() const {
  waveform::mcs_params(mcs_c);
  waveform::mcs_params(mcs_1);
  waveform::mcs_params(mcs_2);
  split.validate();
}

SinrValues sinr_values(const channel::ChannelPair& pair, const precoder::PrecoderSet& pre,
                       double noise_var) {
  if (noise_var < 0.0) throw ConfigError("sinr_values: noise_var must be >= 0");
  const auto g = precoder::effective_gains(pair, pre);
  SinrValues out;
  for (int i = 0; i < 2; ++i) {
    const double own = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)];
    const double other = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(2 - i)];
    const double common = g[static_cast<std::size_t>(i)][0];
    out.common[static_cast<std::size_t>(i)] = common / (own + other + noise_var);
    out.privat[static_cast<std::size_t>(i)] = own / (other + noise_var);
  }
  return out;
}

namespace {

struct StreamSignal {
  std::vector<cplx> data_syms;  // subcarrier-domain payload symbols
  std::vector<cplx> samples;    // time-domain frame
};

StreamSignal make_stream(int mcs_index, const waveform::FrameConfig& frame, int stream_id,
                         Rng& payload_rng) {
  const auto& mcs = waveform::mcs_params(mcs_index);
  const auto& codec = waveform::codec_for_mcs(mcs_index, frame);
  const auto bits = random_bits(codec.k(), payload_rng);
  const auto coded = codec.encode(bits);
  StreamSignal sig;
  sig.data_syms = waveform::qam_modulate(coded, mcs.m);
  sig.samples = waveform::ofdm_assemble(sig.data_syms, frame, stream_pilots(stream_id));
  return sig;
}

/// LS effective-gain estimate from the Walsh-masked pilot cells.
cplx ls_estimate(const waveform::OfdmCells& cells, int stream) {
  const auto pilots = stream_pilots(stream);
  cplx acc{};
  std::size_t count = 0;
  for (const auto& row : cells.pilots) {
    for (std::size_t p = 0; p < row.size(); ++p) {
      acc += row[p] * std::conj(pilots[p]);
      ++count;
    }
  }
  return count ? acc / static_cast<double>(count) : cplx{};
}

}  // namespace

TrialOutcome run_trial(const channel::ChannelPair& pair, const StreamPlan& plan, double noise_var,
                       std::uint64_t seed, const LinkOptions& opt) {
  plan.validate();
  if (noise_var < 0.0) throw ConfigError("run_trial: noise_var must be >= 0");
  const waveform::FrameConfig& frame = opt.frame;
  frame.validate();

  const auto pre = precoder::make_precoder_set(pair, plan.split);
  const bool has_common = norm_sq(pre.p_c) > 0.0;
  const bool has_private = norm_sq(pre.p_1) > 0.0;

  const int mcs_of[3] = {plan.mcs_c, plan.mcs_1, plan.mcs_2};
  const Vec2* pvec[3] = {&pre.p_c, &pre.p_1, &pre.p_2};

  // per-stream payloads and waveforms; separate seed streams keep trials
  // comparable across MCS triples
  std::array<StreamSignal, 3> sig;
  for (int s = 0; s < 3; ++s) {
    const bool present = (s == 0) ? has_common : has_private;
    if (!present) continue;
    Rng rng(mix_seed({seed, kPayloadTag, static_cast<std::uint64_t>(s)}));
    sig[static_cast<std::size_t>(s)] = make_stream(mcs_of[s], frame, s, rng);
  }

  const std::size_t n_samples = static_cast<std::size_t>(frame.samples_per_frame());
  const Vec2* h[2] = {&pair.h1, &pair.h2};

  TrialOutcome out;
  const auto sv = sinr_values(pair, pre, noise_var);
  for (int i = 0; i < 2; ++i) {
    out.sinr_common_db[static_cast<std::size_t>(i)] = lin_to_db(sv.common[static_cast<std::size_t>(i)]);
    out.sinr_private_db[static_cast<std::size_t>(i)] = lin_to_db(sv.privat[static_cast<std::size_t>(i)]);
  }

  bool common_ok[2] = {false, false};
  bool private_ok[2] = {false, false};

  for (int i = 0; i < 2; ++i) {
    // received samples y_i = h_i^H x + n_i
    Rng noise_rng(mix_seed({seed, kNoiseTag, static_cast<std::uint64_t>(i)}));
    std::vector<cplx> y(n_samples);
    for (std::size_t t = 0; t < n_samples; ++t) {
      cplx acc{};
      for (int s = 0; s < 3; ++s) {
        const bool present = (s == 0) ? has_common : has_private;
        if (!present) continue;
        acc += hdot(*h[i], *pvec[s]) * sig[static_cast<std::size_t>(s)].samples[t];
      }
      if (noise_var > 0.0) acc += noise_rng.cgaussian(noise_var);
      y[t] = acc;
    }

    auto cells = waveform::ofdm_extract_cells(y, frame);

    // effective scalar gains: genie by default, LS from pilots when asked
    cplx a[3];
    for (int s = 0; s < 3; ++s) a[s] = hdot(*h[i], *pvec[s]);
    if (opt.csi == ReceiverCsi::kLsPilot) {
      for (int s = 0; s < 3; ++s) a[s] = ls_estimate(cells, s);
    }

    std::vector<cplx> z(cells.data.size());

    if (has_common) {
      const double denom = std::max(std::norm(a[0]), kMinNoiseVar);
      const double sigma_eff =
          std::max((std::norm(a[1]) + std::norm(a[2]) + noise_var) / denom, kMinNoiseVar);
      for (std::size_t k = 0; k < z.size(); ++k) z[k] = cells.data[k] / a[0];
      const auto& mcs = waveform::mcs_params(plan.mcs_c);
      const auto llr = waveform::qam_demodulate_llr(z, mcs.m, sigma_eff, opt.exact_llr);
      const auto& codec = waveform::codec_for_mcs(plan.mcs_c, frame);
      auto res = codec.decode(llr);
      common_ok[i] = res.crc_ok;

      // cancel with the re-encoded DECODED bits; wrong bits corrupt the
      // private stage, which is the SIC error-propagation mechanism
      const auto recoded = codec.encode(res.bits);
      const auto resyms = waveform::qam_modulate(recoded, mcs.m);
      for (std::size_t k = 0; k < cells.data.size(); ++k) {
        cells.data[k] -= a[0] * resyms[k];
      }
    }

    if (has_private) {
      const int own = i + 1;
      const int other = 2 - i;
      const double denom = std::max(std::norm(a[own]), kMinNoiseVar);
      const double sigma_eff = std::max((std::norm(a[other]) + noise_var) / denom, kMinNoiseVar);
      for (std::size_t k = 0; k < z.size(); ++k) z[k] = cells.data[k] / a[own];
      const int mcs_idx = (i == 0) ? plan.mcs_1 : plan.mcs_2;
      const auto& mcs = waveform::mcs_params(mcs_idx);
      const auto llr = waveform::qam_demodulate_llr(z, mcs.m, sigma_eff, opt.exact_llr);
      const auto& codec = waveform::codec_for_mcs(mcs_idx, frame);
      private_ok[i] = codec.decode(llr).crc_ok;
    }
  }

  out.common_ok_u1 = common_ok[0];
  out.common_ok_u2 = common_ok[1];
  out.private_ok_u1 = private_ok[0];
  out.private_ok_u2 = private_ok[1];
  return out;
}

bool ThresholdEntry::valid() const {
  return std::isfinite(snr_db) && std::isfinite(width_db) && width_db > 0.0;
}

const ThresholdEntry& ThresholdTable::entry(int mcs_index) const {
  waveform::mcs_params(mcs_index);
  const auto& e = mcs[static_cast<std::size_t>(mcs_index)];
  if (!e.valid()) {
    throw CalibrationError("threshold table has no entry for MCS " + std::to_string(mcs_index));
  }
  return e;
}

TrialOutcome run_trial_fast(const channel::ChannelPair& pair, const StreamPlan& plan,
                            double noise_var, const ThresholdTable& thresholds,
                            std::uint64_t seed) {
  plan.validate();
  const auto pre = precoder::make_precoder_set(pair, plan.split);
  const bool has_common = plan.split.t < 1.0;
  const bool has_private = plan.split.t > 0.0;
  const auto sv = sinr_values(pair, pre, noise_var);

  Rng rng(mix_seed({seed, kJitterTag}));
  const double zc[2] = {rng.gaussian(), rng.gaussian()};
  const double zp[2] = {rng.gaussian(), rng.gaussian()};

  auto pass = [&](double sinr, int mcs_index, double z) {
    const auto& e = thresholds.entry(mcs_index);
    return lin_to_db(sinr) >= e.snr_db + e.width_db * z;
  };

  TrialOutcome out;
  bool common_ok[2] = {false, false};
  bool private_ok[2] = {false, false};
  for (int i = 0; i < 2; ++i) {
    out.sinr_common_db[static_cast<std::size_t>(i)] = lin_to_db(sv.common[static_cast<std::size_t>(i)]);
    out.sinr_private_db[static_cast<std::size_t>(i)] = lin_to_db(sv.privat[static_cast<std::size_t>(i)]);
    if (has_common) {
      common_ok[i] = pass(sv.common[static_cast<std::size_t>(i)], plan.mcs_c, zc[i]);
    }
    if (has_private) {
      const int mcs_idx = (i == 0) ? plan.mcs_1 : plan.mcs_2;
      const bool sic_ok = has_common ? common_ok[i] : true;
      private_ok[i] = sic_ok && pass(sv.privat[static_cast<std::size_t>(i)], mcs_idx, zp[i]);
    }
  }
  out.common_ok_u1 = common_ok[0];
  out.common_ok_u2 = common_ok[1];
  out.private_ok_u1 = private_ok[0];
  out.private_ok_u2 = private_ok[1];
  return out;
}

bool scalar_awgn_trial(int mcs_index, double snr_db, const waveform::FrameConfig& frame,
                       std::uint64_t seed) {
  const auto& mcs = waveform::mcs_params(mcs_index);
  const auto& codec = waveform::codec_for_mcs(mcs_index, frame);

  Rng rng(mix_seed({seed, kPayloadTag}));
  const auto bits = random_bits(codec.k(), rng);
  const auto coded = codec.encode(bits);
  const auto syms = waveform::qam_modulate(coded, mcs.m);
  auto samples = waveform::ofdm_assemble(syms, frame, waveform::default_pilots());

  const double noise_var = db_to_lin(-snr_db);
  Rng noise_rng(mix_seed({seed, kNoiseTag}));
  for (auto& s : samples) s += noise_rng.cgaussian(noise_var);

  const auto rx = waveform::ofdm_extract(samples, frame);
  const auto llr = waveform::qam_demodulate_llr(rx, mcs.m, noise_var);
  return codec.decode(llr).crc_ok;
}

double fast_success_probability(const ThresholdEntry& entry, double snr_db) {
  const double sigma = entry.width_db / kZ90;
  return gauss_cdf((snr_db - entry.snr_db) / sigma);
}

namespace {

double success_rate(int mcs_index, double snr_db, const waveform::FrameConfig& frame, int runs,
                    std::uint64_t seed, std::uint64_t grid_tag) {
  int ok = 0;
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t trial_seed =
        mix_seed({seed, static_cast<std::uint64_t>(mcs_index), grid_tag,
                  static_cast<std::uint64_t>(r)});
    if (scalar_awgn_trial(mcs_index, snr_db, frame, trial_seed)) ++ok;
  }
  return static_cast<double>(ok) / runs;
}

double interp_crossing(const std::vector<CalPoint>& curve, double level) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].p_success >= level) {
      if (i == 0) return curve[0].snr_db;
      const auto& a = curve[i - 1];
      const auto& b = curve[i];
      if (b.p_success <= a.p_success) return b.snr_db;
      const double f = (level - a.p_success) / (b.p_success - a.p_success);
      return a.snr_db + f * (b.snr_db - a.snr_db);
    }
  }
  return curve.back().snr_db;
}

}  // namespace

ThresholdTable calibrate_thresholds(const waveform::FrameConfig& frame, int runs_per_point,
                                    std::uint64_t seed) {
  frame.validate();
  if (runs_per_point < 100) throw ConfigError("calibrate: runs_per_point must be >= 100");

  ThresholdTable table;
  table.frame = frame;
  table.runs_per_point = runs_per_point;
  table.seed = seed;

  for (int mcs = 0; mcs < waveform::kNumMcs; ++mcs) {
    // coarse bracket with a handful of runs per probe
    constexpr int kQuickRuns = 24;
    double first_hi = std::numeric_limits<double>::quiet_NaN();
    for (double snr = -6.0; snr <= 40.0; snr += 2.0) {
      const std::uint64_t tag = 1000 + static_cast<std::uint64_t>(std::llround((snr + 6.0) * 2.0));
      if (success_rate(mcs, snr, frame, kQuickRuns, seed, tag) >= 0.5) {
        first_hi = snr;
        break;
      }
    }
    if (!std::isfinite(first_hi)) {
      throw CalibrationError("calibrate: no 50% crossing found for MCS " + std::to_string(mcs));
    }

    // fine grid spanning the transition; extend until it is fully bracketed
    double lo = first_hi - 4.0;
    double hi = first_hi + 3.0;
    constexpr double kStep = 0.5;
    std::vector<CalPoint> curve;
    auto fill_curve = [&]() {
      curve.clear();
      for (double snr = lo; snr <= hi + 1e-9; snr += kStep) {
        const std::uint64_t tag = 2000 + static_cast<std::uint64_t>(std::llround((snr + 40.0) * 4.0));
        curve.push_back({snr, success_rate(mcs, snr, frame, runs_per_point, seed, tag)});
      }
    };
    fill_curve();
    for (int guard = 0; guard < 8 && curve.front().p_success > 0.1; ++guard) {
      lo -= 2.0;
      fill_curve();
    }
    for (int guard = 0; guard < 8 && curve.back().p_success < 0.9; ++guard) {
      hi += 2.0;
      fill_curve();
    }
    if (curve.front().p_success > 0.1 || curve.back().p_success < 0.9) {
      throw CalibrationError("calibrate: transition not bracketed for MCS " + std::to_string(mcs));
    }

    // statistical tolerance for dips; a real non-monotonicity means the codec
    // is broken at this blocklength
    const double drop_tol = std::max(0.15, 5.0 / std::sqrt(static_cast<double>(runs_per_point)));
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i].p_success < curve[i - 1].p_success - drop_tol) {
        throw CalibrationError("calibrate: non-monotone success curve for MCS " + std::to_string(mcs));
      }
    }

    ThresholdEntry entry;
    entry.snr_db = interp_crossing(curve, 0.5);
    const double s10 = interp_crossing(curve, 0.1);
    const double s90 = interp_crossing(curve, 0.9);
    entry.width_db = std::max((s90 - s10) / 2.0, 0.05);
    entry.curve = std::move(curve);
    table.mcs[static_cast<std::size_t>(mcs)] = std::move(entry);
  }
  return table;
}

}  // namespace noum::link
