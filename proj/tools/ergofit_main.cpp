// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
//
// Single-binary CLI: simulate | calibrate | test | study | defaults.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergofit/calibration.hpp"
#include "ergofit/errors.hpp"
#include "ergofit/harness.hpp"
#include "ergofit/registry.hpp"
#include "ergofit/simulate.hpp"
#include "ergofit/statistics.hpp"
#include "ergofit/text_io.hpp"

using namespace ergofit;

namespace {

Theta parse_theta_arg(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw validation_error("--theta expects 'alpha,beta', got '" + text + "'");
  }
  return Theta{parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(',', start);
    const std::string tok =
        end == std::string::npos ? text.substr(start) : text.substr(start, end - start);
    if (!tok.empty()) out.push_back(parse_double(tok));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (out.empty()) throw validation_error("--eps expects a comma-separated list");
  return out;
}

int cmd_simulate(const std::string& model_text, const std::string& theta_text, double horizon,
                 double dt, std::uint64_t seed, const std::string& out_path,
                 std::optional<double> x0, std::optional<double> burn_in) {
  const ModelSpec spec = parse_model_spec(model_text);
  RngStream rng(seed, 0);
  double start;
  double burn = 0.0;

  Trajectory traj;
  if (spec.is_family()) {
    const ParametricModel model = build_family(spec);
    if (theta_text.empty()) throw validation_error("family simulation requires --theta");
    const Theta theta = parse_theta_arg(theta_text);
    if (x0) {
      start = *x0;
      burn = burn_in ? *burn_in : defaults().burn_in_fraction * horizon;
    } else {
      start = sample_stationary_init(model, theta, rng);
      burn = burn_in ? *burn_in : 0.0;
    }
    traj = simulate_family_path(model, theta, start, horizon + burn, dt, rng);
  } else {
    const SimpleModel model = build_simple(spec);
    if (!model.tail_check_ok()) {
      std::cerr << "warning: tail sign check failed for '" << model_text << "'\n";
    }
    if (x0) {
      start = *x0;
      burn = burn_in ? *burn_in : defaults().burn_in_fraction * horizon;
    } else {
      start = sample_stationary_init(model, rng);
      burn = burn_in ? *burn_in : 0.0;
    }
    traj = simulate_simple_path(model, start, horizon + burn, dt, rng);
  }
  if (burn > 0.0) {
    const std::size_t drop = static_cast<std::size_t>(std::round(burn / dt));
    traj.values.erase(traj.values.begin(),
                      traj.values.begin() + static_cast<std::ptrdiff_t>(
                                                std::min(drop, traj.values.size() - 2)));
  }
  write_trajectory_csv(traj, out_path);
  std::cout << "wrote " << out_path << " (" << traj.n_steps() << " steps, T=" << traj.horizon()
            << ")\n";
  return 0;
}

int cmd_calibrate(const std::string& law_id, const std::string& eps_text, int n,
                  std::uint64_t seed, const std::string& out_path, const std::string& model_text,
                  int w_steps) {
  const std::vector<double> epsilons = parse_eps_list(eps_text);
  std::unique_ptr<LimitLaw> law;
  if (law_id.rfind("delta_S0", 0) == 0) {
    if (model_text.empty()) {
      throw validation_error("law '" + law_id + "' requires --model <simple spec>");
    }
    const SimpleModel model = build_simple(parse_model_spec(model_text));
    const StatNorm norm = law_id.rfind("delta_S0_sup", 0) == 0 ? StatNorm::ks : StatNorm::cvm;
    law = make_simple_limit_law(model, norm);
    if (law->law_id() != law_id) {
      throw validation_error("law id mismatch: model '" + model_text + "' yields '" +
                             law->law_id() + "', requested '" + law_id + "'");
    }
  } else if (law_id == "int_w2" || law_id == "sup_abs_w") {
    law = make_limit_law(law_id, w_steps);
  } else {
    law = make_limit_law(law_id);
  }
  const CalibrationTable table = calibrate(*law, epsilons, n, seed);
  save_table(table, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_test(const std::string& traj_path, const std::string& stat_text,
             const std::string& model_text, const std::string& table_path, double eps,
             bool no_autocalibrate, int cal_n, std::uint64_t cal_seed,
             bool sigma_weight_increments) {
  const StatisticKind kind = parse_stat_kind(stat_text);
  const ModelSpec spec = parse_model_spec(model_text);
  if (!kind_compatible_with(kind, spec)) {
    throw validation_error("statistic " + stat_kind_name(kind) + " is incompatible with model '" +
                           model_text + "'");
  }
  const Trajectory traj = read_trajectory_csv(traj_path);

  StatValue stat;
  std::string law_id;
  std::unique_ptr<LimitLaw> law;
  std::optional<ThetaEstimate> estimate;
  if (spec.is_family()) {
    const ParametricModel model = build_family(spec);
    law_id = law_id_for(kind, model);
    const ThetaEstimate est = mle(traj, model);
    estimate = est;
    stat = param_stat(traj, model, est, kind);
    law = make_limit_law(law_id);
  } else {
    const SimpleModel model = build_simple(spec);
    law_id = law_id_for(kind, model);
    StatOptions opts;
    opts.increment_sigma_weight = sigma_weight_increments;
    switch (kind.family) {
      case StatFamily::simple_density: stat = simple_density_stat(traj, model, kind.norm); break;
      case StatFamily::adf: stat = adf_stat(traj, model); break;
      case StatFamily::ks_increment: stat = ks_increment_stat(traj, model, opts); break;
      default: throw validation_error("unreachable statistic kind");
    }
    if (kind.family == StatFamily::simple_density) {
      law = make_simple_limit_law(model, kind.norm);
    } else {
      law = make_limit_law(law_id, defaults().w_n_steps);
    }
  }

  CalibrationTable table;
  if (!table_path.empty()) {
    table = load_table(table_path);
    if (!(table.grid == law->grid_meta())) {
      throw validation_error("table " + table_path +
                             " was calibrated under a different sampler grid");
    }
  } else {
    if (no_autocalibrate) {
      throw validation_error("missing --table and --no-autocalibrate is set");
    }
    table = calibrate(*law, {eps}, cal_n, cal_seed);
  }
  const Decision d = decide(stat, table, eps);

  nlohmann::json verdict;
  verdict["version"] = 1;
  verdict["stat_kind"] = stat_kind_name(kind);
  verdict["statistic"] = stat.value;
  verdict["law_id"] = law_id;
  verdict["epsilon"] = eps;
  verdict["threshold"] = table.threshold_for(eps);
  verdict["decision"] = decision_name(d);
  if (stat.meta.theta_hat && estimate) {
    verdict["theta_hat"] = {{"alpha_hat", stat.meta.theta_hat->alpha},
                            {"beta_hat", stat.meta.theta_hat->beta},
                            {"boundary_hit", {estimate->boundary_hit_alpha,
                                              estimate->boundary_hit_beta}}};
  }
  std::cout << verdict.dump(2) << "\n";
  return 0;
}

int cmd_study(const std::string& config_path, const std::string& out_dir) {
  StudyConfig cfg = StudyConfig::from_file(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  const StudyReport report = run_study(cfg);
  report.write(cfg.out_dir);
  std::cout << report.summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goodness-of-fit tests for ergodic diffusion processes"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a diffusion path to CSV");
  std::string sim_model, sim_theta, sim_out = "traj.csv";
  double sim_T = 500.0, sim_dt = defaults().dt;
  std::uint64_t sim_seed = 1;
  std::optional<double> sim_x0, sim_burn;
  double sim_x0_val = 0.0, sim_burn_val = 0.0;
  sim->add_option("--model", sim_model, "Model spec (family:... or simple:...)")->required();
  sim->add_option("--theta", sim_theta, "alpha,beta (family models)");
  sim->add_option("--T", sim_T, "Horizon");
  sim->add_option("--dt", sim_dt, "Step size");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "Output CSV path");
  auto* x0_opt = sim->add_option("--x0", sim_x0_val, "Fixed initial value (default: stationary draw)");
  auto* burn_opt = sim->add_option("--burn-in", sim_burn_val, "Burn-in time to discard");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Monte Carlo thresholds for a limit law");
  std::string cal_law, cal_eps = "0.01,0.05,0.1", cal_out = "table.json", cal_model;
  int cal_n = defaults().calibration_n;
  int cal_wsteps = defaults().w_n_steps;
  std::uint64_t cal_seed = 1;
  cal->add_option("--law", cal_law, "law_id (e.g. Delta:gamma=1, int_w2)")->required();
  cal->add_option("--eps", cal_eps, "Comma-separated epsilons");
  cal->add_option("--n", cal_n, "Replicates");
  cal->add_option("--seed", cal_seed, "RNG seed");
  cal->add_option("--out", cal_out, "Output table path");
  cal->add_option("--model", cal_model, "Simple model spec (delta_S0 laws)");
  cal->add_option("--w-steps", cal_wsteps, "Wiener functional grid steps");

  // test
  auto* tst = app.add_subcommand("test", "Apply a goodness-of-fit test to a trajectory");
  std::string tst_traj, tst_stat, tst_model, tst_table;
  double tst_eps = 0.05;
  bool tst_noauto = false;
  bool tst_sigma_weight = false;
  int tst_cal_n = defaults().calibration_n;
  std::uint64_t tst_cal_seed = 1;
  tst->add_option("--traj", tst_traj, "Trajectory CSV")->required();
  tst->add_option("--stat", tst_stat, "Statistic kind (e.g. ParamEDF:CvM)")->required();
  tst->add_option("--model", tst_model, "Model spec")->required();
  tst->add_option("--table", tst_table, "Calibration table path");
  tst->add_option("--eps", tst_eps, "Test level");
  tst->add_flag("--no-autocalibrate", tst_noauto, "Fail instead of calibrating inline");
  tst->add_flag("--sigma-weighted-increments", tst_sigma_weight,
                "Weight KSIncrement sums by 1/sigma(X)");
  tst->add_option("--cal-n", tst_cal_n, "Inline calibration replicates");
  tst->add_option("--cal-seed", tst_cal_seed, "Inline calibration seed");

  // study
  auto* stu = app.add_subcommand("study", "Run a simulation study from a JSON config");
  std::string stu_config, stu_out;
  stu->add_option("--config", stu_config, "Study config JSON")->required();
  stu->add_option("--out", stu_out, "Output directory (overrides config)");

  // defaults
  auto* def = app.add_subcommand("defaults", "Print every effective default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) {
      if (x0_opt->count()) sim_x0 = sim_x0_val;
      if (burn_opt->count()) sim_burn = sim_burn_val;
      return cmd_simulate(sim_model, sim_theta, sim_T, sim_dt, sim_seed, sim_out, sim_x0, sim_burn);
    }
    if (cal->parsed()) {
      return cmd_calibrate(cal_law, cal_eps, cal_n, cal_seed, cal_out, cal_model, cal_wsteps);
    }
    if (tst->parsed()) {
      return cmd_test(tst_traj, tst_stat, tst_model, tst_table, tst_eps, tst_noauto, tst_cal_n,
                      tst_cal_seed, tst_sigma_weight);
    }
    if (stu->parsed()) {
      return cmd_study(stu_config, stu_out);
    }
    if (def->parsed()) {
      std::cout << defaults_json() << "\n";
      return 0;
    }
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
