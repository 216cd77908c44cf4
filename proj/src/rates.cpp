#include "noum/rates.hpp"

#include <cmath>

#include "noum/errors.hpp"

namespace noum::rates {

void MessageSplit::validate() const {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha: must be in [0, 1]");
}

StreamRates empirical_stream_rates(std::span<const link::TrialOutcome> outcomes,
                                   const link::StreamPlan& plan) {
  if (outcomes.empty()) throw ConfigError("empirical_stream_rates: no outcomes");
  plan.validate();

  int common_both = 0, p1 = 0, p2 = 0;
  for (const auto& o : outcomes) {
    if (o.common_ok_u1 && o.common_ok_u2) ++common_both;
    if (o.private_ok_u1) ++p1;
    if (o.private_ok_u2) ++p2;
  }
  const double n = static_cast<double>(outcomes.size());

  StreamRates r;
  r.n_runs = static_cast<int>(outcomes.size());
  r.p_common_both = common_both / n;
  r.p_private_1 = p1 / n;
  r.p_private_2 = p2 / n;
  r.r_c = waveform::mcs_params(plan.mcs_c).spectral_efficiency() * r.p_common_both;
  r.r_1 = waveform::mcs_params(plan.mcs_1).spectral_efficiency() * r.p_private_1;
  r.r_2 = waveform::mcs_params(plan.mcs_2).spectral_efficiency() * r.p_private_2;
  return r;
}

RatePoint noum_split(const StreamRates& rates, const MessageSplit& split) {
  split.validate();
  RatePoint p;
  p.r_mult = split.alpha * rates.r_c;
  p.r_uni = (1.0 - split.alpha) * rates.r_c + rates.r_1 + rates.r_2;
  return p;
}

RatePoint mulp_rate_point(const StreamRates& rates) {
  // the common stream carries only the multicast message
  RatePoint p;
  p.r_mult = rates.r_c;
  p.r_uni = rates.r_1 + rates.r_2;
  return p;
}

double sum_rate(const StreamRates& rates) { return rates.r_c + rates.r_1 + rates.r_2; }

namespace {

double bernoulli_se(double p, int n) {
  // Agresti-style adjustment: p~ = (s + 1) / (n + 2)
  const double s = p * n;
  const double pa = (s + 1.0) / (n + 2.0);
  return std::sqrt(pa * (1.0 - pa) / n);
}

}  // namespace

RateStdErr rate_std_err(const StreamRates& rates, const link::StreamPlan& plan) {
  RateStdErr se;
  if (rates.n_runs <= 0) return se;
  se.se_c = waveform::mcs_params(plan.mcs_c).spectral_efficiency() *
            bernoulli_se(rates.p_common_both, rates.n_runs);
  se.se_1 = waveform::mcs_params(plan.mcs_1).spectral_efficiency() *
            bernoulli_se(rates.p_private_1, rates.n_runs);
  se.se_2 = waveform::mcs_params(plan.mcs_2).spectral_efficiency() *
            bernoulli_se(rates.p_private_2, rates.n_runs);
  return se;
}

}  // namespace noum::rates
