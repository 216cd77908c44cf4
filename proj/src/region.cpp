#include "noum/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "noum/errors.hpp"
#include "noum/rng.hpp"

namespace noum::region {

namespace {

constexpr std::uint64_t kTrialTag = 4;
constexpr std::uint64_t kEnsembleTag = 5;
constexpr std::uint64_t kScenarioChannelTag = 6;

}  // namespace

std::vector<double> SweepConfig::default_t_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

void SweepConfig::validate() const {
  if (t_grid.empty()) throw ConfigError("sweep.t_grid: must not be empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || t_grid[i] > 1.0) throw ConfigError("sweep.t_grid: values must be in [0, 1]");
    if (i > 0 && t_grid[i] <= t_grid[i - 1]) {
      throw ConfigError("sweep.t_grid: values must be strictly increasing");
    }
  }
  if (mcs_indices.empty()) throw ConfigError("sweep.mcs_indices: must not be empty");
  for (std::size_t i = 0; i < mcs_indices.size(); ++i) {
    waveform::mcs_params(mcs_indices[i]);
    if (i > 0 && mcs_indices[i] <= mcs_indices[i - 1]) {
      throw ConfigError("sweep.mcs_indices: must be strictly increasing");
    }
  }
  if (runs < 1) throw ConfigError("sweep.runs: must be >= 1");
}

Scenario make_scenario(const channel::ChannelConfig& cfg, std::uint64_t base_seed, double p_total,
                       const link::LinkOptions& link_opt) {
  cfg.validate();
  Scenario sc;
  sc.cfg = cfg;
  auto pair = channel::generate_channel_pair(cfg, mix_seed({base_seed, kScenarioChannelTag, 0}));
  sc.pair = channel::corrupt_csit(pair, cfg, mix_seed({base_seed, kScenarioChannelTag, 1}));
  sc.noise_var = channel::noise_variance(sc.pair, cfg, p_total);
  sc.p_total = p_total;
  sc.link_opt = link_opt;
  return sc;
}

namespace {

struct TEvaluation {
  std::vector<SweepRow> rows;  // one per MCS triple, lexicographic order
  std::size_t best = 0;
};

/// Evaluates every triple at one t. Trial seeds depend on (base_seed,
/// t_index, run) but NOT on the triple, so all triples see common random
/// numbers and the argmax is a paired comparison.
TEvaluation evaluate_t(double t, int t_index, const Scenario& scenario, const SweepConfig& cfg,
                       const link::ThresholdTable* thresholds, std::uint64_t base_seed) {
  if (cfg.mode == Mode::kFast && thresholds == nullptr) {
    throw CalibrationError("fast mode requires a calibrated threshold table");
  }

  struct TrialCtx {
    channel::ChannelPair pair;
    double noise_var;
    std::uint64_t seed;
  };
  std::vector<TrialCtx> trials;
  trials.reserve(static_cast<std::size_t>(cfg.runs));
  for (int r = 0; r < cfg.runs; ++r) {
    TrialCtx ctx{scenario.pair, scenario.noise_var,
                 mix_seed({base_seed, kTrialTag, static_cast<std::uint64_t>(t_index),
                           static_cast<std::uint64_t>(r)})};
    if (cfg.ensemble) {
      const std::uint64_t chan_seed = mix_seed({base_seed, kEnsembleTag,
                                                static_cast<std::uint64_t>(t_index),
                                                static_cast<std::uint64_t>(r)});
      auto pair = channel::generate_channel_pair(scenario.cfg, chan_seed);
      ctx.pair = channel::corrupt_csit(pair, scenario.cfg, splitmix64(chan_seed));
      ctx.noise_var = channel::noise_variance(ctx.pair, scenario.cfg, scenario.p_total);
    }
    trials.push_back(ctx);
  }

  TEvaluation ev;
  double best_sum = -1.0;
  std::vector<link::TrialOutcome> outcomes(static_cast<std::size_t>(cfg.runs));

  for (int mc : cfg.mcs_indices) {
    for (int m1 : cfg.mcs_indices) {
      for (int m2 : cfg.mcs_indices) {
        link::StreamPlan plan{mc, m1, m2, {t, scenario.p_total}};
        for (int r = 0; r < cfg.runs; ++r) {
          const auto& ctx = trials[static_cast<std::size_t>(r)];
          outcomes[static_cast<std::size_t>(r)] =
              (cfg.mode == Mode::kFast)
                  ? link::run_trial_fast(ctx.pair, plan, ctx.noise_var, *thresholds, ctx.seed)
                  : link::run_trial(ctx.pair, plan, ctx.noise_var, ctx.seed, scenario.link_opt);
        }
        SweepRow row{t, t_index, plan, rates::empirical_stream_rates(outcomes, plan)};
        const double sum = rates::sum_rate(row.rates);
        ev.rows.push_back(std::move(row));
        if (sum > best_sum) {
          best_sum = sum;
          ev.best = ev.rows.size() - 1;
        }
      }
    }
  }
  return ev;
}

}  // namespace

std::pair<link::StreamPlan, rates::StreamRates> best_mcs_at_t(
    double t, const Scenario& scenario, const SweepConfig& cfg,
    const link::ThresholdTable* thresholds, std::uint64_t base_seed) {
  cfg.validate();
  if (t < 0.0 || t > 1.0) throw ConfigError("best_mcs_at_t: t must be in [0, 1]");
  const auto it = std::find(cfg.t_grid.begin(), cfg.t_grid.end(), t);
  const int t_index = (it != cfg.t_grid.end())
                          ? static_cast<int>(it - cfg.t_grid.begin())
                          : 0;
  const auto ev = evaluate_t(t, t_index, scenario, cfg, thresholds, base_seed);
  return {ev.rows[ev.best].plan, ev.rows[ev.best].rates};
}

RateRegion build_region(const Scenario& scenario, const SweepConfig& cfg,
                        const link::ThresholdTable* thresholds, std::uint64_t base_seed,
                        std::vector<SweepRow>* rows_out) {
  cfg.validate();
  RateRegion region;

  for (std::size_t ti = 0; ti < cfg.t_grid.size(); ++ti) {
    const double t = cfg.t_grid[ti];
    auto ev = evaluate_t(t, static_cast<int>(ti), scenario, cfg, thresholds, base_seed);
    const SweepRow& best = ev.rows[ev.best];

    PerTPoint pt;
    pt.t = t;
    pt.best_plan = best.plan;
    pt.best_rates = best.rates;
    pt.best_se = rates::rate_std_err(best.rates, best.plan);
    pt.mulp_point = rates::mulp_rate_point(best.rates);
    pt.alpha0_point = rates::noum_split(best.rates, rates::MessageSplit{0.0});
    region.per_t.push_back(pt);

    if (rows_out) {
      rows_out->insert(rows_out->end(), ev.rows.begin(), ev.rows.end());
    }
  }

  region.t_star_index = 0;
  region.max_sum_rate = -1.0;
  for (std::size_t ti = 0; ti < region.per_t.size(); ++ti) {
    const double sum = rates::sum_rate(region.per_t[ti].best_rates);
    if (sum > region.max_sum_rate) {
      region.max_sum_rate = sum;
      region.t_star_index = ti;
    }
  }
  region.t_star = region.per_t[region.t_star_index].t;

  const PerTPoint& star = region.per_t[region.t_star_index];
  // A sits on the multicast axis, B and F on the unicast axis
  region.a = rates::RatePoint{rates::sum_rate(region.per_t.front().best_rates), 0.0};
  region.b = rates::RatePoint{0.0, rates::sum_rate(region.per_t.back().best_rates)};
  region.d = star.mulp_point;
  region.f = rates::RatePoint{0.0, region.max_sum_rate};
  region.e_r0 = star.best_rates.r_c / 2.0;
  region.e = rates::RatePoint{region.e_r0, region.max_sum_rate - region.e_r0};

  std::vector<rates::RatePoint> rsma_points, mulp_points;
  for (const auto& pt : region.per_t) {
    rsma_points.push_back(pt.mulp_point);
    rsma_points.push_back(pt.alpha0_point);
    mulp_points.push_back(pt.mulp_point);
  }
  region.hull = time_sharing_boundary(rsma_points);
  region.mulp_hull = time_sharing_boundary(mulp_points);

  double peak_mult = 0.0;
  for (const auto& pt : region.per_t) peak_mult = std::max(peak_mult, pt.best_rates.r_c);
  if (peak_mult > 0.0) {
    for (int j = 0; j < kLemma1GridPoints; ++j) {
      const double r0 = peak_mult * j / (kLemma1GridPoints - 1);
      region.lemma1.push_back(lemma1_check(region, r0));
    }
  } else {
    region.lemma1.push_back(lemma1_check(region, 0.0));
  }

  return region;
}

namespace {

double cross(const rates::RatePoint& o, const rates::RatePoint& a, const rates::RatePoint& b) {
  return (a.r_uni - o.r_uni) * (b.r_mult - o.r_mult) - (a.r_mult - o.r_mult) * (b.r_uni - o.r_uni);
}

}  // namespace

std::vector<rates::RatePoint> time_sharing_boundary(std::span<const rates::RatePoint> points) {
  if (points.empty()) throw ConfigError("time_sharing_boundary: no points");

  double xmax = 0.0, ymax = 0.0;
  for (const auto& p : points) {
    xmax = std::max(xmax, p.r_uni);
    ymax = std::max(ymax, p.r_mult);
  }

  std::vector<rates::RatePoint> pts(points.begin(), points.end());
  pts.push_back({0.0, 0.0});
  pts.push_back({ymax, 0.0});
  pts.push_back({0.0, xmax});

  std::sort(pts.begin(), pts.end(), [](const rates::RatePoint& a, const rates::RatePoint& b) {
    if (a.r_uni != b.r_uni) return a.r_uni < b.r_uni;
    return a.r_mult < b.r_mult;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  if (pts.size() == 1) return pts;

  // monotone chain; strict turns drop collinear interior points
  std::vector<rates::RatePoint> lower, upper;
  for (const auto& p : pts) {
    while (lower.size() >= 2 && cross(lower[lower.size() - 2], lower.back(), p) <= 0.0) {
      lower.pop_back();
    }
    lower.push_back(p);
  }
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), *it) <= 0.0) {
      upper.pop_back();
    }
    upper.push_back(*it);
  }
  lower.pop_back();
  upper.pop_back();
  std::vector<rates::RatePoint> hull = lower;  // CCW polygon
  hull.insert(hull.end(), upper.begin(), upper.end());

  // Pareto chain: clockwise walk from the max-multicast vertex to the
  // max-unicast vertex
  std::size_t start = 0, stop = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& p = hull[i];
    const auto& s = hull[start];
    if (p.r_mult > s.r_mult || (p.r_mult == s.r_mult && p.r_uni < s.r_uni)) start = i;
    const auto& e = hull[stop];
    if (p.r_uni > e.r_uni || (p.r_uni == e.r_uni && p.r_mult < e.r_mult)) stop = i;
  }

  std::vector<rates::RatePoint> boundary;
  for (std::size_t i = start;; i = (i + hull.size() - 1) % hull.size()) {
    boundary.push_back(hull[i]);
    if (i == stop) break;
    if (boundary.size() > hull.size()) break;  // degenerate single-vertex hull
  }
  return boundary;
}

double region_area(std::span<const rates::RatePoint> boundary) {
  if (boundary.size() < 2) return 0.0;
  // shoelace of the polygon closed through the origin
  std::vector<rates::RatePoint> poly;
  poly.push_back({0.0, 0.0});
  poly.insert(poly.end(), boundary.begin(), boundary.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    acc += p.r_uni * q.r_mult - q.r_uni * p.r_mult;
  }
  return std::abs(acc) / 2.0;
}

Lemma1Record lemma1_check(const RateRegion& region, double r_0) {
  if (r_0 < 0.0) throw ConfigError("lemma1_check: r_0 must be >= 0");
  if (region.per_t.empty()) throw ConfigError("lemma1_check: empty region");

  Lemma1Record rec;
  rec.r_0 = r_0;

  double mulp_best = -std::numeric_limits<double>::infinity();
  double mulp_se = 0.0;
  for (const auto& pt : region.per_t) {
    if (pt.best_rates.r_c >= r_0) {
      const double uni = pt.best_rates.r_1 + pt.best_rates.r_2;
      if (uni > mulp_best) {
        mulp_best = uni;
        mulp_se = std::sqrt(pt.best_se.se_1 * pt.best_se.se_1 + pt.best_se.se_2 * pt.best_se.se_2);
      }
    }
  }
  rec.mulp_feasible = std::isfinite(mulp_best);
  if (rec.mulp_feasible) {
    rec.mulp_uni = mulp_best;
    rec.mulp_se = mulp_se;
  }

  const PerTPoint& star = region.per_t[region.t_star_index];
  if (r_0 <= star.best_rates.r_c) {
    rec.rsma_uni = star.best_rates.r_c - r_0 + star.best_rates.r_1 + star.best_rates.r_2;
    rec.rsma_se = std::sqrt(star.best_se.se_c * star.best_se.se_c +
                            star.best_se.se_1 * star.best_se.se_1 +
                            star.best_se.se_2 * star.best_se.se_2);
  } else if (rec.mulp_feasible) {
    // the best the grid offers when even t* cannot carry r_0
    rec.rsma_uni = rec.mulp_uni;
    rec.rsma_se = rec.mulp_se;
  } else {
    rec.rsma_uni = std::numeric_limits<double>::quiet_NaN();
    rec.rsma_ge_mulp = true;  // vacuous: no scheme reaches r_0
    rec.rsma_ge_mulp_within_2se = true;
    return rec;
  }

  if (!rec.mulp_feasible) {
    rec.rsma_ge_mulp = true;
    rec.rsma_ge_mulp_within_2se = true;
    return rec;
  }
  const double comb = std::sqrt(rec.rsma_se * rec.rsma_se + rec.mulp_se * rec.mulp_se);
  rec.rsma_ge_mulp = rec.rsma_uni >= rec.mulp_uni;
  rec.rsma_ge_mulp_within_2se = rec.rsma_uni >= rec.mulp_uni - 2.0 * comb;
  return rec;
}

}  // namespace noum::region
