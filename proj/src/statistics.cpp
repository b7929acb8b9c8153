// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/statistics.hpp"

#include <cmath>

#include "ergofit/errors.hpp"
#include "ergofit/numerics.hpp"

namespace ergofit {

void validate_statistic_kind(const StatisticKind& kind) {
  if (kind.family == StatFamily::adf && kind.norm != StatNorm::cvm) {
    throw validation_error("ADF statistic supports the CvM (integral) norm only");
  }
  if (kind.family == StatFamily::ks_increment && kind.norm != StatNorm::ks) {
    throw validation_error("KSIncrement statistic supports the KS (sup) norm only");
  }
}

std::string stat_kind_name(const StatisticKind& kind) {
  return stat_family_name(kind.family) + ":" + stat_norm_name(kind.norm);
}

StatisticKind parse_stat_kind(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw validation_error("statistic kind must be '<Family>:<Norm>', got '" + text + "'");
  }
  StatisticKind kind;
  kind.family = parse_stat_family(text.substr(0, colon));
  kind.norm = parse_stat_norm(text.substr(colon + 1));
  validate_statistic_kind(kind);
  return kind;
}

double reduce_probability_grid(std::span<const double> deviations, StatNorm norm) {
  if (deviations.empty()) throw validation_error("reduce: empty grid");
  if (norm == StatNorm::cvm) {
    double acc = 0.0;
    for (double d : deviations) acc += d * d;
    return acc / static_cast<double>(deviations.size() + 1);
  }
  double m = 0.0;
  for (double d : deviations) m = std::max(m, std::abs(d));
  return m;
}

double param_stat_normalization(double gamma, double sigma, double beta_hat,
                                StatNorm norm, double horizon) {
  const double gp1 = gamma + 1.0;
  if (norm == StatNorm::cvm) {
    return std::pow(beta_hat, 2.0 / gp1) * std::pow(sigma, 2.0 * (gamma - 1.0) / gp1) * horizon;
  }
  return std::pow(beta_hat, 1.0 / gp1) * std::pow(sigma, (gamma - 1.0) / gp1) * std::sqrt(horizon);
}

namespace {

std::vector<double> quantile_grid_x(const ParametricModel& model, const Theta& theta,
                                    std::size_t m) {
  std::vector<double> xs(m);
  for (std::size_t j = 0; j < m; ++j) {
    xs[j] = model.invariant_quantile(theta, static_cast<double>(j + 1) / (static_cast<double>(m) + 1));
  }
  return xs;
}

std::vector<double> quantile_grid_x(const SimpleModel& model, std::size_t m) {
  std::vector<double> xs(m);
  for (std::size_t j = 0; j < m; ++j) {
    xs[j] = model.quantile(static_cast<double>(j + 1) / (static_cast<double>(m) + 1));
  }
  return xs;
}

StatMeta make_meta(const PathIndex& index, int grid_m, std::string law_id,
                   std::optional<Theta> theta_hat = std::nullopt) {
  StatMeta meta;
  meta.grid_m = grid_m;
  meta.horizon = index.total_time();
  meta.dt = index.dt();
  meta.theta_hat = theta_hat;
  meta.law_id = std::move(law_id);
  return meta;
}

}  // namespace

StatValue param_stat(const PathIndex& index, const ParametricModel& model,
                     const ThetaEstimate& theta_hat, const StatisticKind& kind,
                     const StatOptions& opts) {
  validate_statistic_kind(kind);
  if (kind.family != StatFamily::param_edf && kind.family != StatFamily::param_density) {
    throw validation_error("param_stat: statistic family is not a composite-hypothesis kind");
  }
  if (model.regime() == GammaRegime::unsupported) {
    throw validation_error("unsupported regime gamma=0.5");
  }
  if (!model.theta_box().contains(theta_hat.theta)) {
    throw validation_error("param_stat: theta_hat outside the parameter box");
  }
  if (opts.grid_m < 2) throw validation_error("param_stat: grid_m too small");
  const std::size_t m = static_cast<std::size_t>(opts.grid_m);
  const Theta& th = theta_hat.theta;
  const std::vector<double> xs = quantile_grid_x(model, th, m);
  const double total_time = index.total_time();

  std::vector<double> dev(m);
  if (kind.family == StatFamily::param_edf) {
    for (std::size_t j = 0; j < m; ++j) {
      const double t = static_cast<double>(j + 1) / (static_cast<double>(m) + 1);
      dev[j] = index.edf_below(xs[j]) - t;
    }
  } else {
    const double sig = model.sigma();
    for (std::size_t j = 0; j < m; ++j) {
      const double f_hat = std::max(0.0, index.local_time(xs[j]) / (total_time * sig * sig));
      dev[j] = f_hat - model.invariant_density(th, xs[j]);
    }
  }

  double raw = reduce_probability_grid(dev, kind.norm);
  double value;
  if (kind.family == StatFamily::param_edf) {
    value = param_stat_normalization(model.gamma(), model.sigma(), th.beta, kind.norm,
                                     total_time) *
            raw;
  } else {
    const double sig = model.sigma();
    value = kind.norm == StatNorm::cvm ? sig * sig * total_time * raw
                                       : sig * std::sqrt(total_time) * raw;
  }

  StatValue out;
  out.value = value;
  out.kind = kind;
  out.meta = make_meta(index, opts.grid_m, param_law_id(kind.family, kind.norm, model.gamma()), th);
  return out;
}

StatValue simple_density_stat(const PathIndex& index, const SimpleModel& model,
                              StatNorm norm, const StatOptions& opts) {
  if (opts.grid_m < 2) throw validation_error("simple_density_stat: grid_m too small");
  const std::vector<double> xs = quantile_grid_x(model, static_cast<std::size_t>(opts.grid_m));
  const double total_time = index.total_time();
  std::vector<double> dev(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double sig = model.diffusion(xs[j]);
    const double f_hat = std::max(0.0, index.local_time(xs[j]) / (total_time * sig * sig));
    dev[j] = f_hat - model.density(xs[j]);
  }
  const double raw = reduce_probability_grid(dev, norm);

  StatValue out;
  out.value = norm == StatNorm::cvm ? total_time * raw : std::sqrt(total_time) * raw;
  out.kind = StatisticKind{StatFamily::simple_density, norm};
  out.meta = make_meta(index, opts.grid_m, simple_law_id(model, norm));
  return out;
}

namespace {

// Per-step weights w_k = (dX_k - S0(X_k) dt) * scale(X_k); the inner process
// at level x is the prefix sum over steps with X_k < x.
std::vector<double> increment_weights(const PathIndex& index, const SimpleModel& model,
                                      bool sigma_weight) {
  const Trajectory& traj = index.trajectory();
  const std::size_t n = index.n_steps();
  const double dt = index.dt();
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = traj.values[k];
    double v = traj.values[k + 1] - x - model.drift(x) * dt;
    if (sigma_weight) {
      const double s = model.diffusion(x);
      if (!(s > 0.0)) throw numerical_error("statistic: sigma(X_t) <= 0 along the path");
      v /= s;
    }
    w[k] = v;
  }
  return w;
}

}  // namespace

StatValue adf_stat(const PathIndex& index, const SimpleModel& model,
                   const StatOptions& opts) {
  if (opts.grid_m < 2) throw validation_error("adf_stat: grid_m too small");
  const std::vector<double> xs = quantile_grid_x(model, static_cast<std::size_t>(opts.grid_m));
  const std::vector<double> prefix = index.sorted_prefix(increment_weights(index, model, true));
  const double inv_sqrt_t = 1.0 / std::sqrt(index.total_time());
  std::vector<double> dev(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    dev[j] = inv_sqrt_t * index.prefix_below(prefix, xs[j]);
  }
  StatValue out;
  out.value = reduce_probability_grid(dev, StatNorm::cvm);
  out.kind = StatisticKind{StatFamily::adf, StatNorm::cvm};
  out.meta = make_meta(index, opts.grid_m, "int_w2");
  return out;
}

StatValue ks_increment_stat(const PathIndex& index, const SimpleModel& model,
                            const StatOptions& opts) {
  if (opts.grid_m < 2) throw validation_error("ks_increment_stat: grid_m too small");
  const std::vector<double> xs = quantile_grid_x(model, static_cast<std::size_t>(opts.grid_m));
  const std::vector<double> prefix =
      index.sorted_prefix(increment_weights(index, model, opts.increment_sigma_weight));
  const double inv_sqrt_t = 1.0 / std::sqrt(index.total_time());
  std::vector<double> dev(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    dev[j] = inv_sqrt_t * index.prefix_below(prefix, xs[j]);
  }
  StatValue out;
  out.value = reduce_probability_grid(dev, StatNorm::ks);
  out.kind = StatisticKind{StatFamily::ks_increment, StatNorm::ks};
  out.meta = make_meta(index, opts.grid_m, "sup_abs_w");
  return out;
}

StatValue param_stat(const Trajectory& traj, const ParametricModel& model,
                     const ThetaEstimate& theta_hat, const StatisticKind& kind,
                     const StatOptions& opts) {
  return param_stat(PathIndex(traj), model, theta_hat, kind, opts);
}

StatValue simple_density_stat(const Trajectory& traj, const SimpleModel& model,
                              StatNorm norm, const StatOptions& opts) {
  return simple_density_stat(PathIndex(traj), model, norm, opts);
}

StatValue adf_stat(const Trajectory& traj, const SimpleModel& model,
                   const StatOptions& opts) {
  return adf_stat(PathIndex(traj), model, opts);
}

StatValue ks_increment_stat(const Trajectory& traj, const SimpleModel& model,
                            const StatOptions& opts) {
  return ks_increment_stat(PathIndex(traj), model, opts);
}

}  // namespace ergofit
