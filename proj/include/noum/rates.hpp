#pragma once

#include <span>

#include "noum/link.hpp"

namespace noum::rates {

/// Fraction of the common message devoted to multicast: alpha = |W_0|/|W_c|.
/// alpha = 1 is MULP-based NOUM; alpha = 0 is a purely-unicast common stream.
struct MessageSplit {
  double alpha = 1.0;

  void validate() const;
};

/// MCS-limited stream rates in bits/s/Hz plus the empirical probabilities
/// behind them.
struct StreamRates {
  double r_c = 0.0;
  double r_1 = 0.0;
  double r_2 = 0.0;
  double p_common_both = 0.0;
  double p_private_1 = 0.0;
  double p_private_2 = 0.0;
  int n_runs = 0;

  bool operator==(const StreamRates&) const = default;
};

struct RatePoint {
  double r_mult = 0.0;  // multicast rate, bits/s/Hz
  double r_uni = 0.0;   // unicast sum rate, bits/s/Hz

  double mult_mbps() const { return waveform::kBandwidthMhz * r_mult; }
  double uni_mbps() const { return waveform::kBandwidthMhz * r_uni; }

  bool operator==(const RatePoint&) const = default;
};

/// r_c = m_c r_c * P(common decoded at BOTH users); r_i = m_i r_i * P(private
/// decoded at user i), probabilities taken as trial fractions.
StreamRates empirical_stream_rates(std::span<const link::TrialOutcome> outcomes,
                                   const link::StreamPlan& plan);

/// Splits the common rate: r_mult = alpha * r_c,
/// r_uni = (1 - alpha) * r_c + r_1 + r_2.
RatePoint noum_split(const StreamRates& rates, const MessageSplit& split);

/// The alpha = 1 special case, computed on its own path; bitwise equal to
/// noum_split at alpha = 1.
RatePoint mulp_rate_point(const StreamRates& rates);

double sum_rate(const StreamRates& rates);

/// Monte-Carlo standard errors of the rate estimates, with a +1/+2 adjusted
/// probability so boundary estimates (0/1 successes) keep a non-zero error bar.
struct RateStdErr {
  double se_c = 0.0;
  double se_1 = 0.0;
  double se_2 = 0.0;
};

RateStdErr rate_std_err(const StreamRates& rates, const link::StreamPlan& plan);

}  // namespace noum::rates
