#pragma once

#include <array>

#include "noum/channel.hpp"
#include "noum/types.hpp"

namespace noum::precoder {

/// Power allocation between the common stream and the two private streams.
/// t is the private-stream fraction: ||p_c||^2 = p_total*(1-t),
/// ||p_i||^2 = p_total*t/2.
struct PowerSplit {
  double t = 0.5;
  double p_total = 1.0;

  void validate() const;
};

struct PrecoderSet {
  Vec2 p_c, p_1, p_2;
};

/// Weighted-MRT common precoder sqrt(p_total*(1-t)) * (u1+u2)/||u1+u2||.
/// t = 1 returns the zero vector without evaluating the direction.
/// Throws DegenerateGeometryError when the estimates are anti-parallel.
Vec2 common_precoder(const Vec2& h1_hat, const Vec2& h2_hat, const PowerSplit& split);

/// Zero-forcing private precoders: p_i = sqrt(p_total*t/2) * u_j_perp, j != i,
/// with the nullspace phase fixed so the first non-zero component is real
/// positive. Throws DegenerateGeometryError on a zero-norm estimate.
std::array<Vec2, 2> private_precoders(const Vec2& h1_hat, const Vec2& h2_hat,
                                      const PowerSplit& split);

PrecoderSet make_precoder_set(const channel::ChannelPair& pair, const PowerSplit& split);

/// |h_i^H p_x|^2 on the TRUE channels; rows are users 1,2, columns are
/// streams c,1,2.
std::array<std::array<double, 3>, 2> effective_gains(const channel::ChannelPair& pair,
                                                     const PrecoderSet& pre);

}  // namespace noum::precoder
