#include "noum/channel.hpp"

#include <cmath>
#include <numbers>

#include "noum/errors.hpp"
#include "noum/rng.hpp"

namespace noum::channel {

void ChannelConfig::validate() const {
  if (n_tx != 2) throw ConfigError("n_tx: only 2 TX antennas are supported");
  if (rho < 0.0 || rho > 1.0) throw ConfigError("rho: must be in [0, 1]");
  if (pathloss_delta_db < 0.0) throw ConfigError("pathloss_delta_db: must be >= 0");
  if (csit_error_var < 0.0) throw ConfigError("csit_error_var: must be >= 0");
}

namespace {

/// Unit vector orthogonal to u in C^2, before any phase convention.
Vec2 orthogonal_unit(const Vec2& u) {
  return Vec2{{-std::conj(u[1]), std::conj(u[0])}};
}

}  // namespace

ChannelPair generate_channel_pair(const ChannelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(mix_seed({seed, 0x6368616e6e656cULL}));

  Vec2 h1{{rng.cgaussian(1.0), rng.cgaussian(1.0)}};
  double n1 = norm(h1);
  // A numerically-zero draw would break the direction construction; the
  // probability is negligible but the retry keeps the contract total.
  while (n1 < 1e-12) {
    h1 = Vec2{{rng.cgaussian(1.0), rng.cgaussian(1.0)}};
    n1 = norm(h1);
  }

  const Vec2 u1 = (1.0 / n1) * h1;
  const Vec2 u1p = orthogonal_unit(u1);

  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const cplx phase = std::polar(1.0, phi);
  const Vec2 dir = cfg.rho * u1 + std::sqrt(1.0 - cfg.rho * cfg.rho) * (phase * u1p);

  // ||dir|| = 1, so g2 sets ||h2|| directly; the pathloss ratio holds per
  // realization, not just in expectation.
  const double g2 = std::pow(10.0, -cfg.pathloss_delta_db / 20.0) * n1;
  const Vec2 h2 = g2 * dir;

  return ChannelPair{h1, h2, h1, h2};
}

ChannelPair corrupt_csit(const ChannelPair& pair, const ChannelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ChannelPair out = pair;
  if (cfg.csit_error_var == 0.0) {
    out.h1_hat = pair.h1;
    out.h2_hat = pair.h2;
    return out;
  }
  Rng rng(mix_seed({seed, 0x63736974ULL}));
  const double v1 = cfg.csit_error_var * norm_sq(pair.h1) / cfg.n_tx;
  const double v2 = cfg.csit_error_var * norm_sq(pair.h2) / cfg.n_tx;
  out.h1_hat = pair.h1 + Vec2{{rng.cgaussian(v1), rng.cgaussian(v1)}};
  out.h2_hat = pair.h2 + Vec2{{rng.cgaussian(v2), rng.cgaussian(v2)}};
  return out;
}

double correlation(const ChannelPair& pair) {
  const double n1 = norm(pair.h1);
  const double n2 = norm(pair.h2);
  if (n1 < 1e-15 || n2 < 1e-15) {
    throw DegenerateGeometryError("correlation: zero-norm channel vector");
  }
  return std::abs(hdot(pair.h1, pair.h2)) / (n1 * n2);
}

double noise_variance(const ChannelPair& pair, const ChannelConfig& cfg, double p_total) {
  return norm_sq(pair.h1) * p_total / (cfg.n_tx * db_to_lin(cfg.snr_db));
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"case1", 0.30, 0.0},
      {"case2", 0.70, 0.0},
      {"case3", 0.95, 0.0},
      {"case4", 0.95, 8.0},
  };
  return table;
}

ChannelConfig preset_config(const std::string& name) {
  for (const Preset& p : presets()) {
    if (p.name == name) {
      ChannelConfig cfg;
      cfg.rho = p.rho;
      cfg.pathloss_delta_db = p.pathloss_delta_db;
      return cfg;
    }
  }
  throw ConfigError("unknown scenario preset: " + name);
}

}  // namespace noum::channel
