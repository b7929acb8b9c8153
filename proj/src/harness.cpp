// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ergofit/errors.hpp"
#include "ergofit/numerics.hpp"
#include "ergofit/parallel.hpp"
#include "ergofit/simulate.hpp"
#include "ergofit/text_io.hpp"

namespace ergofit {

std::string study_kind_name(StudyKind k) {
  switch (k) {
    case StudyKind::size: return "size";
    case StudyKind::power: return "power";
    case StudyKind::paramfree: return "paramfree";
    case StudyKind::limitmatch: return "limitmatch";
  }
  return "?";
}

StudyKind parse_study_kind(const std::string& s) {
  if (s == "size") return StudyKind::size;
  if (s == "power") return StudyKind::power;
  if (s == "paramfree") return StudyKind::paramfree;
  if (s == "limitmatch") return StudyKind::limitmatch;
  throw validation_error("unknown study kind: '" + s + "'");
}

namespace {

Theta theta_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw validation_error("theta must be a [alpha, beta] pair");
  }
  return Theta{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

StudyConfig StudyConfig::from_json(const nlohmann::json& doc) {
  StudyConfig cfg;
  try {
    if (doc.value("version", 1) != 1) throw validation_error("study config: unsupported version");
    cfg.study = parse_study_kind(doc.at("study").get<std::string>());
    cfg.model = parse_model_spec(doc.at("model").get<std::string>());
    if (doc.contains("theta")) cfg.theta = theta_from_json(doc["theta"]);
    if (doc.contains("true_model")) {
      cfg.true_model = parse_model_spec(doc["true_model"].get<std::string>());
    }
    if (doc.contains("true_theta")) cfg.true_theta = theta_from_json(doc["true_theta"]);
    cfg.horizon = doc.value("T", 500.0);
    cfg.dt = doc.value("dt", defaults().dt);
    if (doc.contains("T_ladder")) cfg.t_ladder = doc["T_ladder"].get<std::vector<double>>();
    cfg.n_replicates = doc.value("n_replicates", 300);
    for (const auto& s : doc.at("stats")) cfg.stats.push_back(parse_stat_kind(s.get<std::string>()));
    if (doc.contains("epsilons")) cfg.epsilons = doc["epsilons"].get<std::vector<double>>();
    cfg.seed = doc.value("seed", static_cast<std::uint64_t>(1));
    if (doc.contains("thetas")) {
      for (const auto& t : doc["thetas"]) cfg.thetas.push_back(theta_from_json(t));
    }
    cfg.limit_n = doc.value("limit_n", defaults().limitmatch_n);
    cfg.grid_m = doc.value("grid_m", defaults().stat_grid_m);
    cfg.increment_sigma_weight = doc.value("increment_sigma_weight", false);
    if (doc.contains("tables")) {
      cfg.tables = doc["tables"].get<std::map<std::string, std::string>>();
    }
    cfg.autocalibrate = doc.value("autocalibrate", true);
    cfg.calibration_n = doc.value("calibration_n", defaults().calibration_n);
    cfg.calibration_seed = doc.value("calibration_seed", static_cast<std::uint64_t>(0));
    cfg.out_dir = doc.value("out", std::string("report"));
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("study config: ") + e.what());
  }
  if (cfg.calibration_seed == 0) cfg.calibration_seed = cfg.seed ^ 0x9E3779B97F4A7C15ULL;

  // Fail fast: misconfiguration must surface before any simulation.
  if (cfg.n_replicates < 50) throw validation_error("study config: n_replicates must be >= 50");
  if (cfg.stats.empty()) throw validation_error("study config: stats must be nonempty");
  for (const auto& kind : cfg.stats) {
    if (!kind_compatible_with(kind, cfg.model)) {
      throw validation_error("statistic " + stat_kind_name(kind) + " is incompatible with model '" +
                             cfg.model.raw + "'");
    }
  }
  if (cfg.model.is_family()) {
    const ParametricModel m = build_family(cfg.model);
    if (m.regime() == GammaRegime::unsupported) {
      const bool needs_regime = std::any_of(cfg.stats.begin(), cfg.stats.end(), [](const auto& k) {
        return k.family == StatFamily::param_edf || k.family == StatFamily::param_density;
      });
      if (needs_regime) throw validation_error("unsupported regime gamma=0.5");
    }
    if ((cfg.study == StudyKind::size || cfg.study == StudyKind::limitmatch) && !cfg.theta) {
      throw validation_error("study config: family model needs theta for simulation");
    }
    if (cfg.theta && !m.theta_box().contains(*cfg.theta)) {
      throw validation_error("study config: theta outside the parameter box");
    }
  }
  const bool needs_thresholds = cfg.study == StudyKind::size || cfg.study == StudyKind::power;
  if (needs_thresholds) {
    if (cfg.epsilons.empty()) throw validation_error("study config: epsilons must be nonempty");
    for (double e : cfg.epsilons) {
      if (!(e > 0.0 && e < 1.0)) throw validation_error("study config: epsilon outside (0,1)");
    }
    if (!cfg.autocalibrate) {
      for (const auto& kind : cfg.stats) {
        const std::string law = cfg.model.is_family()
                                    ? law_id_for(kind, build_family(cfg.model))
                                    : law_id_for(kind, build_simple(cfg.model));
        if (!cfg.tables.count(law)) {
          throw validation_error("study config: no table for law '" + law +
                                 "' and autocalibrate is off");
        }
      }
    }
  }
  if (cfg.study == StudyKind::power && !cfg.true_model) {
    throw validation_error("power study: true_model is required");
  }
  if (cfg.study == StudyKind::power && cfg.true_model->is_family() && !cfg.true_theta) {
    throw validation_error("power study: family true_model needs true_theta");
  }
  if (cfg.study == StudyKind::paramfree) {
    if (!cfg.model.is_family()) throw validation_error("paramfree study needs a family model");
    if (cfg.thetas.size() < 2) throw validation_error("paramfree study needs at least 2 thetas");
    if (cfg.stats.size() != 1) {
      throw validation_error("paramfree study compares ensembles of exactly one statistic kind");
    }
    const ParametricModel m = build_family(cfg.model);
    for (const auto& t : cfg.thetas) {
      if (!m.theta_box().contains(t)) {
        throw validation_error("paramfree study: theta outside the parameter box");
      }
    }
  }
  if (cfg.study == StudyKind::limitmatch && cfg.stats.size() != 1) {
    throw validation_error("limitmatch study uses exactly one statistic kind");
  }

  cfg.echo = doc;
  cfg.echo["calibration_seed"] = cfg.calibration_seed;
  return cfg;
}

StudyConfig StudyConfig::from_file(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("study config " + path.string() + ": not valid JSON (" + e.what() + ")");
  }
  return from_json(doc);
}

namespace {

struct H0Context {
  std::optional<ParametricModel> family;
  std::optional<SimpleModel> simple;

  bool needs_mle(const std::vector<StatisticKind>& stats) const {
    if (!family) return false;
    for (const auto& k : stats) {
      if (k.family == StatFamily::param_edf || k.family == StatFamily::param_density) return true;
    }
    return false;
  }
};

H0Context make_h0(const ModelSpec& spec) {
  H0Context ctx;
  if (spec.is_family()) {
    ctx.family = build_family(spec);
  } else {
    ctx.simple = build_simple(spec);
  }
  return ctx;
}

struct Generator {
  // data-generating process: family theta or simple drift
  std::optional<ParametricModel> family;
  std::optional<Theta> theta;
  std::optional<SimpleModel> simple;

  double init(RngStream& rng) const {
    return family ? sample_stationary_init(*family, *theta, rng)
                  : sample_stationary_init(*simple, rng);
  }
  Trajectory path(double x0, double horizon, double dt, RngStream& rng) const {
    return family ? simulate_family_path(*family, *theta, x0, horizon, dt, rng)
                  : simulate_simple_path(*simple, x0, horizon, dt, rng);
  }
};

std::vector<StatRow> run_ensemble(const Generator& gen, const H0Context& h0,
                                  const std::vector<StatisticKind>& stats, double horizon,
                                  double dt, int n, std::uint64_t seed, int grid_m,
                                  bool increment_sigma_weight) {
  std::vector<std::vector<StatRow>> per_rep(static_cast<std::size_t>(n));
  const bool with_mle = h0.needs_mle(stats);
  StatOptions opts;
  opts.grid_m = grid_m;
  opts.increment_sigma_weight = increment_sigma_weight;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    RngStream rng(seed, i);
    const double x0 = gen.init(rng);
    const Trajectory traj = gen.path(x0, horizon, dt, rng);
    const PathIndex index(traj);
    std::optional<ThetaEstimate> est;
    if (with_mle) est = mle(index, *h0.family);
    std::vector<StatRow>& rows = per_rep[i];
    rows.reserve(stats.size());
    for (const auto& kind : stats) {
      StatValue sv;
      switch (kind.family) {
        case StatFamily::param_edf:
        case StatFamily::param_density:
          sv = param_stat(index, *h0.family, *est, kind, opts);
          break;
        case StatFamily::simple_density:
          sv = simple_density_stat(index, *h0.simple, kind.norm, opts);
          break;
        case StatFamily::adf:
          sv = adf_stat(index, *h0.simple, opts);
          break;
        case StatFamily::ks_increment:
          sv = ks_increment_stat(index, *h0.simple, opts);
          break;
      }
      StatRow row;
      row.replicate = static_cast<int>(i);
      row.kind = kind;
      row.value = sv.value;
      row.theta_hat = sv.meta.theta_hat;
      if (est) {
        row.boundary_hit_alpha = est->boundary_hit_alpha;
        row.boundary_hit_beta = est->boundary_hit_beta;
      }
      rows.push_back(row);
    }
  });
  std::vector<StatRow> rows;
  rows.reserve(static_cast<std::size_t>(n) * stats.size());
  for (auto& r : per_rep) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::unique_ptr<LimitLaw> sampler_for(const StatisticKind& kind, const std::string& law,
                                      const H0Context& h0) {
  if (kind.family == StatFamily::simple_density) {
    return make_simple_limit_law(*h0.simple, kind.norm);
  }
  if (kind.family == StatFamily::adf || kind.family == StatFamily::ks_increment) {
    return make_limit_law(law, defaults().w_n_steps);
  }
  return make_limit_law(law);
}

std::map<std::string, CalibrationTable> resolve_tables(const StudyConfig& cfg,
                                                       const H0Context& h0) {
  std::map<std::string, CalibrationTable> tables;
  if (cfg.study != StudyKind::size && cfg.study != StudyKind::power) return tables;
  for (const auto& kind : cfg.stats) {
    const std::string law =
        h0.family ? law_id_for(kind, *h0.family) : law_id_for(kind, *h0.simple);
    if (tables.count(law)) continue;
    std::unique_ptr<LimitLaw> sampler = sampler_for(kind, law, h0);
    const auto it = cfg.tables.find(law);
    if (it != cfg.tables.end()) {
      CalibrationTable t = load_table(it->second);
      if (t.law_id != law) {
        throw validation_error("table " + it->second + " holds law '" + t.law_id +
                               "', expected '" + law + "'");
      }
      // thresholds depend on the sampler discretization; a table built under a
      // different grid does not calibrate this configuration
      if (!(t.grid == sampler->grid_meta())) {
        throw validation_error("table " + it->second +
                               " was calibrated under a different sampler grid");
      }
      tables.emplace(law, std::move(t));
      continue;
    }
    if (!cfg.autocalibrate) {
      throw validation_error("no calibration table for law '" + law + "'");
    }
    tables.emplace(law, calibrate(*sampler, cfg.epsilons, cfg.calibration_n,
                                  cfg.calibration_seed));
  }
  return tables;
}

nlohmann::json rejection_summary(const std::vector<StatRow>& rows,
                                 const std::vector<StatisticKind>& stats,
                                 const std::vector<double>& epsilons,
                                 const std::map<std::string, CalibrationTable>& tables,
                                 const H0Context& h0) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& kind : stats) {
    const std::string law = h0.family ? law_id_for(kind, *h0.family) : law_id_for(kind, *h0.simple);
    const CalibrationTable& table = tables.at(law);
    for (double eps : epsilons) {
      const double c = table.threshold_for(eps);
      const double rate = rejection_rate(rows, kind, c);
      std::size_t n = 0;
      for (const auto& r : rows) {
        if (r.kind == kind) ++n;
      }
      nlohmann::json entry;
      entry["stat"] = stat_kind_name(kind);
      entry["law_id"] = law;
      entry["epsilon"] = eps;
      entry["threshold"] = c;
      entry["rejection_rate"] = rate;
      entry["mc_se"] = std::sqrt(rate * (1.0 - rate) / static_cast<double>(std::max<std::size_t>(n, 1)));
      entry["n"] = n;
      out.push_back(entry);
    }
  }
  return out;
}

}  // namespace

namespace {

// MLE echo per the report interface: {"alpha_hat","beta_hat","boundary_hit"}.
nlohmann::json estimate_summary(const std::vector<RowGroup>& groups) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& group : groups) {
    double a = 0.0, b = 0.0;
    std::size_t n = 0, hits = 0;
    for (const auto& row : group.rows) {
      if (!row.theta_hat) continue;
      a += row.theta_hat->alpha;
      b += row.theta_hat->beta;
      if (row.boundary_hit_alpha || row.boundary_hit_beta) ++hits;
      ++n;
    }
    if (n == 0) continue;
    nlohmann::json entry;
    entry["group"] = group.label;
    entry["alpha_hat"] = a / static_cast<double>(n);
    entry["beta_hat"] = b / static_cast<double>(n);
    entry["boundary_hit"] = hits;
    out.push_back(entry);
  }
  return out;
}

}  // namespace

double rejection_rate(const std::vector<StatRow>& rows, const StatisticKind& kind,
                      double threshold) {
  std::size_t n = 0, rejected = 0;
  for (const auto& r : rows) {
    if (!(r.kind == kind)) continue;
    ++n;
    if (r.value > threshold) ++rejected;
  }
  if (n == 0) return 0.0;
  return static_cast<double>(rejected) / static_cast<double>(n);
}

std::string rows_csv_text(const RowGroup& group) {
  std::string out = "replicate,stat_kind,norm,value,alpha_hat,beta_hat\n";
  for (const auto& r : group.rows) {
    out += std::to_string(r.replicate);
    out += ',';
    out += stat_family_name(r.kind.family);
    out += ',';
    out += stat_norm_name(r.kind.norm);
    out += ',';
    out += format_double(r.value);
    out += ',';
    if (r.theta_hat) {
      out += format_double(r.theta_hat->alpha);
      out += ',';
      out += format_double(r.theta_hat->beta);
    } else {
      out += ',';
    }
    out += '\n';
  }
  return out;
}

void StudyReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& group : groups) {
    write_text_file(dir / (group.label + ".csv"), rows_csv_text(group));
  }
  for (const auto& [name, samples] : extra_samples) {
    std::string out = "replicate,value\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      out += std::to_string(i) + "," + format_double(samples[i]) + "\n";
    }
    write_text_file(dir / (name + ".csv"), out);
  }
  for (const auto& [law, table] : tables_used) {
    std::string stem = law;
    for (char& c : stem) {
      if (c == ':' || c == '=' || c == '/') c = '_';
    }
    save_table(table, dir / "tables" / (stem + ".json"));
  }
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
}

StudyReport run_study(const StudyConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  StudyReport report;
  report.config = cfg;
  report.summary["config"] = cfg.echo;
  report.summary["study"] = study_kind_name(cfg.study);

  const H0Context h0 = make_h0(cfg.model);
  if (h0.simple && !h0.simple->tail_check_ok()) {
    report.summary["warnings"] = {"tail sign check failed for model '" + cfg.model.raw + "'"};
  }
  report.tables_used = resolve_tables(cfg, h0);

  const auto h0_generator = [&]() {
    Generator gen;
    if (h0.family) {
      gen.family = *h0.family;
      gen.theta = cfg.theta ? *cfg.theta : Theta{0.0, 1.0};
    } else {
      gen.simple = *h0.simple;
    }
    return gen;
  };

  switch (cfg.study) {
    case StudyKind::size: {
      Generator gen = h0_generator();
      RowGroup group;
      group.label = "rows";
      group.horizon = cfg.horizon;
      group.rows = run_ensemble(gen, h0, cfg.stats, cfg.horizon, cfg.dt, cfg.n_replicates,
                                cfg.seed, cfg.grid_m, cfg.increment_sigma_weight);
      report.summary["rejections"] =
          rejection_summary(group.rows, cfg.stats, cfg.epsilons, report.tables_used, h0);
      report.groups.push_back(std::move(group));
      break;
    }
    case StudyKind::power: {
      Generator gen;
      if (cfg.true_model->is_family()) {
        gen.family = build_family(*cfg.true_model);
        gen.theta = *cfg.true_theta;
      } else {
        gen.simple = build_simple(*cfg.true_model);
      }
      std::vector<double> ladder = cfg.t_ladder.empty() ? std::vector<double>{cfg.horizon}
                                                        : cfg.t_ladder;
      nlohmann::json per_t = nlohmann::json::array();
      for (double horizon : ladder) {
        RowGroup group;
        group.label = ladder.size() == 1 ? "rows" : "rows_T" + format_double_short(horizon);
        group.horizon = horizon;
        // horizon folded into the seed stream ids via offset so ladder rungs
        // use disjoint replicate streams deterministically.
        const std::uint64_t rung_seed = cfg.seed + static_cast<std::uint64_t>(horizon * 1000.0);
        group.rows = run_ensemble(gen, h0, cfg.stats, horizon, cfg.dt, cfg.n_replicates,
                                  rung_seed, cfg.grid_m, cfg.increment_sigma_weight);
        nlohmann::json entry;
        entry["T"] = horizon;
        entry["rejections"] =
            rejection_summary(group.rows, cfg.stats, cfg.epsilons, report.tables_used, h0);
        per_t.push_back(entry);
        report.groups.push_back(std::move(group));
      }
      report.summary["power"] = per_t;
      break;
    }
    case StudyKind::paramfree: {
      std::vector<std::vector<double>> ensembles;  // per theta, per stat kind order
      nlohmann::json groups_meta = nlohmann::json::array();
      for (std::size_t ti = 0; ti < cfg.thetas.size(); ++ti) {
        Generator gen;
        gen.family = *h0.family;
        gen.theta = cfg.thetas[ti];
        RowGroup group;
        group.label = "rows_theta" + std::to_string(ti);
        group.horizon = cfg.horizon;
        group.rows = run_ensemble(gen, h0, cfg.stats, cfg.horizon, cfg.dt, cfg.n_replicates,
                                  cfg.seed + ti, cfg.grid_m, cfg.increment_sigma_weight);
        std::vector<double> values;
        for (const auto& r : group.rows)
          if (r.kind == cfg.stats[0]) values.push_back(r.value);
        ensembles.push_back(std::move(values));
        nlohmann::json gm;
        gm["theta"] = {cfg.thetas[ti].alpha, cfg.thetas[ti].beta};
        gm["label"] = group.label;
        groups_meta.push_back(gm);
        report.groups.push_back(std::move(group));
      }
      nlohmann::json pairwise = nlohmann::json::array();
      for (std::size_t i = 0; i < ensembles.size(); ++i) {
        for (std::size_t j = i + 1; j < ensembles.size(); ++j) {
          const double d = two_sample_ks(ensembles[i], ensembles[j]);
          const double crit = two_sample_ks_critical(0.01, ensembles[i].size(), ensembles[j].size());
          nlohmann::json entry;
          entry["i"] = i;
          entry["j"] = j;
          entry["ks_distance"] = d;
          entry["critical_1pct"] = crit;
          entry["distinguishable"] = d > crit;
          pairwise.push_back(entry);
        }
      }
      report.summary["ensembles"] = groups_meta;
      report.summary["pairwise_ks"] = pairwise;
      break;
    }
    case StudyKind::limitmatch: {
      Generator gen = h0_generator();
      RowGroup group;
      group.label = "rows";
      group.horizon = cfg.horizon;
      group.rows = run_ensemble(gen, h0, cfg.stats, cfg.horizon, cfg.dt, cfg.n_replicates,
                                cfg.seed, cfg.grid_m, cfg.increment_sigma_weight);
      const StatisticKind kind = cfg.stats[0];
      const std::string law =
          h0.family ? law_id_for(kind, *h0.family) : law_id_for(kind, *h0.simple);
      const std::unique_ptr<LimitLaw> sampler = sampler_for(kind, law, h0);
      const std::vector<double> limit_samples =
          draw_limit_samples(*sampler, cfg.limit_n, cfg.calibration_seed);
      std::vector<double> stat_values;
      for (const auto& r : group.rows)
        if (r.kind == kind) stat_values.push_back(r.value);
      const double d = two_sample_ks(stat_values, limit_samples);
      report.summary["law_id"] = law;
      report.summary["ks_distance"] = d;
      report.summary["finite_T_n"] = stat_values.size();
      report.summary["limit_n"] = limit_samples.size();
      report.summary["critical_1pct"] =
          two_sample_ks_critical(0.01, stat_values.size(), limit_samples.size());
      report.groups.push_back(std::move(group));
      report.extra_samples.emplace_back("limit_samples", limit_samples);
      break;
    }
  }

  const nlohmann::json estimates = estimate_summary(report.groups);
  if (!estimates.empty()) report.summary["estimates"] = estimates;

  const auto t_end = std::chrono::steady_clock::now();
  report.wall_clock_sec = std::chrono::duration<double>(t_end - t_start).count();
  report.summary["wall_clock_sec"] = report.wall_clock_sec;
  return report;
}

}  // namespace ergofit
