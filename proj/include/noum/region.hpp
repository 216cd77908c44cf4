#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "noum/channel.hpp"
#include "noum/link.hpp"
#include "noum/rates.hpp"

namespace noum::region {

enum class Mode { kFull, kFast };

struct SweepConfig {
  std::vector<double> t_grid = default_t_grid();
  std::vector<int> mcs_indices = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  int runs = 50;
  Mode mode = Mode::kFull;
  bool ensemble = false;  // fresh channel per trial instead of one fixed pair

  static std::vector<double> default_t_grid();
  void validate() const;
};

/// A fully-resolved experiment endpoint: the channel realization, the noise
/// level derived from it, and the link options trials run with.
struct Scenario {
  channel::ChannelConfig cfg;
  channel::ChannelPair pair;
  double noise_var = 0.0;
  double p_total = 1.0;
  link::LinkOptions link_opt;
};

/// Draws the fixed channel realization for a scenario seed and derives the
/// noise variance from the configured SNR.
Scenario make_scenario(const channel::ChannelConfig& cfg, std::uint64_t base_seed,
                       double p_total = 1.0, const link::LinkOptions& link_opt = {});

struct PerTPoint {
  double t = 0.0;
  link::StreamPlan best_plan;
  rates::StreamRates best_rates;
  rates::RateStdErr best_se;
  rates::RatePoint mulp_point;    // alpha = 1 segment endpoint
  rates::RatePoint alpha0_point;  // alpha = 0 segment endpoint
};

/// One evaluated (t, MCS-triple) grid cell of the brute-force sweep.
struct SweepRow {
  double t = 0.0;
  int t_index = 0;
  link::StreamPlan plan;
  rates::StreamRates rates;
};

struct Lemma1Record {
  double r_0 = 0.0;
  bool mulp_feasible = false;
  double mulp_uni = 0.0;
  double mulp_se = 0.0;
  double rsma_uni = 0.0;
  double rsma_se = 0.0;
  bool rsma_ge_mulp = false;         // strict comparison
  bool rsma_ge_mulp_within_2se = false;
};

struct RateRegion {
  std::vector<PerTPoint> per_t;
  std::size_t t_star_index = 0;
  double t_star = 0.0;
  double max_sum_rate = 0.0;
  std::vector<rates::RatePoint> hull;       // RSMA time-sharing boundary
  std::vector<rates::RatePoint> mulp_hull;  // boundary through alpha = 1 points
  rates::RatePoint a, b, d, f;
  rates::RatePoint e;
  double e_r0 = 0.0;
  std::vector<Lemma1Record> lemma1;
};

/// Brute-force search of Eq.-(10) type: evaluates every MCS triple at this t
/// with `runs` trials, common random numbers across triples, and returns the
/// sum-rate maximizer (ties to the lexicographically lowest triple).
std::pair<link::StreamPlan, rates::StreamRates> best_mcs_at_t(
    double t, const Scenario& scenario, const SweepConfig& cfg,
    const link::ThresholdTable* thresholds, std::uint64_t base_seed);

/// Full sweep over the t grid. rows_out, when given, receives every evaluated
/// (t, triple) cell in deterministic grid order.
RateRegion build_region(const Scenario& scenario, const SweepConfig& cfg,
                        const link::ThresholdTable* thresholds, std::uint64_t base_seed,
                        std::vector<SweepRow>* rows_out = nullptr);

/// Upper-right Pareto boundary of the convex hull of the points plus the two
/// axis segments, sorted by increasing unicast rate.
std::vector<rates::RatePoint> time_sharing_boundary(std::span<const rates::RatePoint> points);

/// Area enclosed by a time-sharing boundary and the axes.
double region_area(std::span<const rates::RatePoint> boundary);

/// Compares RSMA against MULP at multicast rate r_0 on the sweep grid.
Lemma1Record lemma1_check(const RateRegion& region, double r_0);

inline constexpr int kLemma1GridPoints = 20;

}  // namespace noum::region
