#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "noum/cli.hpp"
#include "noum/errors.hpp"

namespace noum::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

double j6(double v) { return round_sig6(v); }

ordered_json point_json(const rates::RatePoint& p) {
  return ordered_json{{"r_uni", j6(p.r_uni)}, {"r_mult", j6(p.r_mult)}};
}

ordered_json frame_json(const waveform::FrameConfig& f) {
  return ordered_json{{"n_fft", f.n_fft},     {"n_data", f.n_data},
                      {"n_pilot", f.n_pilot}, {"n_guard", f.n_guard},
                      {"cp_len", f.cp_len},   {"payload_symbols", f.payload_symbols}};
}

waveform::FrameConfig frame_from_json(const ordered_json& j) {
  waveform::FrameConfig f;
  f.n_fft = j.at("n_fft").get<int>();
  f.n_data = j.at("n_data").get<int>();
  f.n_pilot = j.at("n_pilot").get<int>();
  f.n_guard = j.at("n_guard").get<int>();
  f.cp_len = j.at("cp_len").get<int>();
  f.payload_symbols = j.at("payload_symbols").get<int>();
  return f;
}

std::string sweep_csv(const std::vector<region::SweepRow>& rows) {
  std::ostringstream out;
  out << "t,mcs_c,mcs_1,mcs_2,p_common_both,p_priv1,p_priv2,rc_bpshz,r1_bpshz,r2_bpshz,sum_mbps\n";
  for (const auto& row : rows) {
    const double sum_mbps =
        waveform::kBandwidthMhz * (row.rates.r_c + row.rates.r_1 + row.rates.r_2);
    out << format_sig6(row.t) << ',' << row.plan.mcs_c << ',' << row.plan.mcs_1 << ','
        << row.plan.mcs_2 << ',' << format_sig6(row.rates.p_common_both) << ','
        << format_sig6(row.rates.p_private_1) << ',' << format_sig6(row.rates.p_private_2) << ','
        << format_sig6(row.rates.r_c) << ',' << format_sig6(row.rates.r_1) << ','
        << format_sig6(row.rates.r_2) << ',' << format_sig6(sum_mbps) << "\n";
  }
  return out.str();
}

std::string bars_csv(const region::RateRegion& reg) {
  std::ostringstream out;
  out << "t,mcs_c,mcs_1,mcs_2,common_mbps,private1_mbps,private2_mbps,sum_mbps\n";
  for (const auto& pt : reg.per_t) {
    const double c = waveform::kBandwidthMhz * pt.best_rates.r_c;
    const double p1 = waveform::kBandwidthMhz * pt.best_rates.r_1;
    const double p2 = waveform::kBandwidthMhz * pt.best_rates.r_2;
    out << format_sig6(pt.t) << ',' << pt.best_plan.mcs_c << ',' << pt.best_plan.mcs_1 << ','
        << pt.best_plan.mcs_2 << ',' << format_sig6(c) << ',' << format_sig6(p1) << ','
        << format_sig6(p2) << ',' << format_sig6(c + p1 + p2) << "\n";
  }
  return out.str();
}

ordered_json region_json(const ExperimentResult& result, const ExperimentConfig& cfg) {
  const auto& reg = result.region;
  ordered_json j;
  j["scenario"] = ordered_json{{"preset", cfg.scenario_preset},
                               {"rho", j6(cfg.channel.rho)},
                               {"pathloss_delta_db", j6(cfg.channel.pathloss_delta_db)},
                               {"snr_db", j6(cfg.channel.snr_db)},
                               {"csit_error_var", j6(cfg.channel.csit_error_var)},
                               {"p_total", j6(cfg.p_total)},
                               {"base_seed", cfg.base_seed},
                               {"mode", cfg.sweep.mode == region::Mode::kFast ? "fast" : "full"},
                               {"runs", cfg.sweep.runs}};
  j["t_star"] = j6(reg.t_star);
  j["t_star_index"] = reg.t_star_index;
  j["max_sum_rate_bpshz"] = j6(reg.max_sum_rate);
  j["max_sum_throughput_mbps"] = j6(waveform::kBandwidthMhz * reg.max_sum_rate);

  j["per_t"] = ordered_json::array();
  for (const auto& pt : reg.per_t) {
    ordered_json e;
    e["t"] = j6(pt.t);
    e["plan"] = ordered_json{{"mcs_c", pt.best_plan.mcs_c},
                             {"mcs_1", pt.best_plan.mcs_1},
                             {"mcs_2", pt.best_plan.mcs_2}};
    e["rates"] = ordered_json{{"r_c", j6(pt.best_rates.r_c)},
                              {"r_1", j6(pt.best_rates.r_1)},
                              {"r_2", j6(pt.best_rates.r_2)}};
    e["probs"] = ordered_json{{"common_both", j6(pt.best_rates.p_common_both)},
                              {"priv1", j6(pt.best_rates.p_private_1)},
                              {"priv2", j6(pt.best_rates.p_private_2)}};
    e["mulp_point"] = point_json(pt.mulp_point);
    e["alpha0_point"] = point_json(pt.alpha0_point);
    j["per_t"].push_back(std::move(e));
  }

  j["hull"] = ordered_json::array();
  for (const auto& p : reg.hull) j["hull"].push_back(point_json(p));
  j["mulp_hull"] = ordered_json::array();
  for (const auto& p : reg.mulp_hull) j["mulp_hull"].push_back(point_json(p));

  ordered_json e_point = point_json(reg.e);
  e_point["r_0"] = j6(reg.e_r0);
  j["landmarks"] = ordered_json{{"A", point_json(reg.a)},
                                {"B", point_json(reg.b)},
                                {"D", point_json(reg.d)},
                                {"E", std::move(e_point)},
                                {"F", point_json(reg.f)}};

  j["lemma1"] = ordered_json::array();
  for (const auto& rec : reg.lemma1) {
    ordered_json r;
    r["r_0"] = j6(rec.r_0);
    r["mulp_feasible"] = rec.mulp_feasible;
    if (rec.mulp_feasible) {
      r["mulp_uni"] = j6(rec.mulp_uni);
      r["mulp_se"] = j6(rec.mulp_se);
    }
    if (std::isfinite(rec.rsma_uni)) {
      r["rsma_uni"] = j6(rec.rsma_uni);
      r["rsma_se"] = j6(rec.rsma_se);
    }
    r["rsma_ge_mulp"] = rec.rsma_ge_mulp;
    r["rsma_ge_mulp_within_2se"] = rec.rsma_ge_mulp_within_2se;
    j["lemma1"].push_back(std::move(r));
  }
  return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;

  const link::ThresholdTable* table = nullptr;
  if (cfg.sweep.mode == region::Mode::kFast) {
    bool loaded = false;
    if (!cfg.calibration_file.empty() && std::filesystem::exists(cfg.calibration_file)) {
      result.thresholds = load_thresholds(cfg.calibration_file);
      const auto& f = result.thresholds.frame;
      const auto& p = cfg.phy;
      if (f.n_fft != p.n_fft || f.n_data != p.n_data || f.n_pilot != p.n_pilot ||
          f.n_guard != p.n_guard || f.cp_len != p.cp_len ||
          f.payload_symbols != p.payload_symbols) {
        throw CalibrationError("threshold table frame does not match phy config: " +
                               cfg.calibration_file);
      }
      loaded = true;
    }
    if (!loaded) {
      result.thresholds = link::calibrate_thresholds(cfg.phy, cfg.calibrate_runs);
      if (!cfg.calibration_file.empty()) save_thresholds(result.thresholds, cfg.calibration_file);
    }
    result.used_thresholds = true;
    table = &result.thresholds;
  }

  const auto scenario = region::make_scenario(cfg.channel, cfg.base_seed, cfg.p_total,
                                              cfg.link_options());
  result.region = region::build_region(scenario, cfg.sweep, table, cfg.base_seed, &result.rows);
  return result;
}

void emit_results(const ExperimentResult& result, const ExperimentConfig& cfg) {
  const std::filesystem::path dir(cfg.output_dir);
  atomic_write(dir / "sweep.csv", sweep_csv(result.rows));
  atomic_write(dir / "bars.csv", bars_csv(result.region));
  atomic_write(dir / "region.json", region_json(result, cfg).dump(2) + "\n");
  atomic_write(dir / "effective.conf", emit_config(cfg));
}

void save_thresholds(const link::ThresholdTable& table, const std::filesystem::path& path) {
  ordered_json j;
  j["version"] = table.version;
  j["frame"] = frame_json(table.frame);
  j["runs_per_point"] = table.runs_per_point;
  j["seed"] = table.seed;
  j["mcs"] = ordered_json::array();
  for (int i = 0; i < waveform::kNumMcs; ++i) {
    const auto& e = table.mcs[static_cast<std::size_t>(i)];
    ordered_json entry;
    entry["index"] = i;
    entry["snr_db"] = j6(e.snr_db);
    entry["width_db"] = j6(e.width_db);
    entry["curve"] = ordered_json::array();
    for (const auto& pt : e.curve) {
      entry["curve"].push_back(ordered_json{{"snr_db", j6(pt.snr_db)}, {"p", j6(pt.p_success)}});
    }
    j["mcs"].push_back(std::move(entry));
  }
  atomic_write(path, j.dump(2) + "\n");
}

link::ThresholdTable load_thresholds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read threshold table: " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CalibrationError("threshold table parse error: " + std::string(e.what()));
  }
  link::ThresholdTable table;
  if (j.at("version").get<int>() != table.version) {
    throw CalibrationError("threshold table version mismatch: " + path.string());
  }
  table.frame = frame_from_json(j.at("frame"));
  table.runs_per_point = j.at("runs_per_point").get<int>();
  table.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& entry : j.at("mcs")) {
    const int idx = entry.at("index").get<int>();
    waveform::mcs_params(idx);
    auto& e = table.mcs[static_cast<std::size_t>(idx)];
    e.snr_db = entry.at("snr_db").get<double>();
    e.width_db = entry.at("width_db").get<double>();
    if (entry.contains("curve")) {
      for (const auto& pt : entry.at("curve")) {
        e.curve.push_back({pt.at("snr_db").get<double>(), pt.at("p").get<double>()});
      }
    }
  }
  return table;
}

}  // namespace noum::cli
