#include "noum/precoder.hpp"

#include <cmath>

#include "noum/errors.hpp"

namespace noum::precoder {

void PowerSplit::validate() const {
  if (t < 0.0 || t > 1.0) throw ConfigError("t: must be in [0, 1]");
  if (p_total <= 0.0) throw ConfigError("p_total: must be > 0");
}

namespace {

Vec2 unit(const Vec2& h, const char* who) {
  const double n = norm(h);
  if (n < 1e-15) throw DegenerateGeometryError(std::string("zero-norm channel estimate: ") + who);
  return (1.0 / n) * h;
}

/// Unit nullspace vector of h with the first non-zero component real positive.
Vec2 null_unit(const Vec2& h, const char* who) {
  const Vec2 u = unit(h, who);
  Vec2 p{{-std::conj(u[1]), std::conj(u[0])}};
  const cplx lead = (std::abs(p[0]) > 1e-14) ? p[0] : p[1];
  const cplx rot = std::conj(lead) / std::abs(lead);
  return rot * p;
}

}  // namespace

Vec2 common_precoder(const Vec2& h1_hat, const Vec2& h2_hat, const PowerSplit& split) {
  split.validate();
  if (split.t == 1.0) return Vec2{};

  const Vec2 sum = unit(h1_hat, "h1_hat") + unit(h2_hat, "h2_hat");
  const double n = norm(sum);
  if (n < 1e-9) {
    throw DegenerateGeometryError("common_precoder: estimates are anti-parallel");
  }
  const double amp = std::sqrt(split.p_total * (1.0 - split.t));
  return (amp / n) * sum;
}

std::array<Vec2, 2> private_precoders(const Vec2& h1_hat, const Vec2& h2_hat,
                                      const PowerSplit& split) {
  split.validate();
  const double amp = std::sqrt(split.p_total * split.t / 2.0);
  // Directions are evaluated even at t = 0 so a zero-norm estimate is
  // rejected uniformly across the t grid.
  const Vec2 d1 = null_unit(h2_hat, "h2_hat");
  const Vec2 d2 = null_unit(h1_hat, "h1_hat");
  return {amp * d1, amp * d2};
}

PrecoderSet make_precoder_set(const channel::ChannelPair& pair, const PowerSplit& split) {
  const auto priv = private_precoders(pair.h1_hat, pair.h2_hat, split);
  return PrecoderSet{common_precoder(pair.h1_hat, pair.h2_hat, split), priv[0], priv[1]};
}

std::array<std::array<double, 3>, 2> effective_gains(const channel::ChannelPair& pair,
                                                     const PrecoderSet& pre) {
  std::array<std::array<double, 3>, 2> g{};
  const Vec2* h[2] = {&pair.h1, &pair.h2};
  const Vec2* p[3] = {&pre.p_c, &pre.p_1, &pre.p_2};
  for (int i = 0; i < 2; ++i) {
    for (int x = 0; x < 3; ++x) {
      g[i][x] = std::norm(hdot(*h[i], *p[x]));
    }
  }
  return g;
}

}  // namespace noum::precoder
