// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergofit/errors.hpp"
#include "ergofit/numerics.hpp"

namespace ergofit {

PathIndex::PathIndex(const Trajectory& traj) : traj_(&traj) {
  if (traj.values.size() < 2) throw validation_error("trajectory must have at least 2 points");
  if (!(traj.dt > 0.0)) throw validation_error("trajectory dt must be > 0");
  const std::size_t n = traj.values.size() - 1;
  dt_ = traj.dt;
  total_time_ = traj.horizon();
  x_first_ = traj.values.front();
  x_last_ = traj.values.back();

  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::sort(order_.begin(), order_.end(), [&traj](std::size_t a, std::size_t b) {
    return traj.values[a] < traj.values[b];
  });
  sorted_x_.resize(n);
  prefix_dx_.resize(n + 1);
  prefix_dx_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = order_[i];
    sorted_x_[i] = traj.values[k];
    prefix_dx_[i + 1] = prefix_dx_[i] + (traj.values[k + 1] - traj.values[k]);
  }
}

double PathIndex::edf_below(double x) const {
  const auto it = std::lower_bound(sorted_x_.begin(), sorted_x_.end(), x);
  const double count = static_cast<double>(it - sorted_x_.begin());
  return count / static_cast<double>(sorted_x_.size());
}

double PathIndex::signed_increment_sum(double x) const {
  // sum sgn(X_k - x) dX_k = total - 2 * (sum over X_k < x) with X_k == x
  // contributing 0 (sgn(0) := 0).
  const auto lo = std::lower_bound(sorted_x_.begin(), sorted_x_.end(), x);
  const auto hi = std::upper_bound(lo, sorted_x_.end(), x);
  const std::size_t i_lo = static_cast<std::size_t>(lo - sorted_x_.begin());
  const std::size_t i_hi = static_cast<std::size_t>(hi - sorted_x_.begin());
  const double below = prefix_dx_[i_lo];
  const double at = prefix_dx_[i_hi] - prefix_dx_[i_lo];
  const double total = prefix_dx_.back();
  return total - at - 2.0 * below;
}

double PathIndex::local_time(double x) const {
  return std::abs(x_last_ - x) - std::abs(x_first_ - x) - signed_increment_sum(x);
}

std::vector<double> PathIndex::sorted_prefix(std::span<const double> step_weights) const {
  if (step_weights.size() != sorted_x_.size()) {
    throw validation_error("sorted_prefix: weight count must equal step count");
  }
  std::vector<double> prefix(sorted_x_.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted_x_.size(); ++i) {
    prefix[i + 1] = prefix[i] + step_weights[order_[i]];
  }
  return prefix;
}

double PathIndex::prefix_below(const std::vector<double>& prefix, double x) const {
  const auto it = std::lower_bound(sorted_x_.begin(), sorted_x_.end(), x);
  return prefix[static_cast<std::size_t>(it - sorted_x_.begin())];
}

std::vector<double> edf(const PathIndex& index, std::span<const double> x_grid) {
  if (x_grid.empty()) throw validation_error("edf: empty grid");
  std::vector<double> out(x_grid.size());
  for (std::size_t j = 0; j < x_grid.size(); ++j) out[j] = index.edf_below(x_grid[j]);
  return out;
}

std::vector<double> edf(const Trajectory& traj, std::span<const double> x_grid) {
  return edf(PathIndex(traj), x_grid);
}

std::vector<double> local_time_density(const PathIndex& index,
                                       std::span<const double> x_grid,
                                       const std::function<double(double)>& sigma) {
  if (x_grid.size() < 2) throw validation_error("local_time_density: need at least 2 grid points");
  std::vector<double> out(x_grid.size());
  const double total_time = index.total_time();
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    const double s = sigma(x_grid[j]);
    const double value = index.local_time(x_grid[j]) / (total_time * s * s);
    out[j] = std::max(0.0, value);
  }
  return out;
}

std::vector<double> local_time_density(const Trajectory& traj,
                                       std::span<const double> x_grid,
                                       const std::function<double(double)>& sigma) {
  return local_time_density(PathIndex(traj), x_grid, sigma);
}

EmpiricalCurves empirical_curves(const Trajectory& traj,
                                 std::span<const double> x_grid,
                                 const std::function<double(double)>& sigma) {
  const PathIndex index(traj);
  EmpiricalCurves curves;
  curves.x_grid.assign(x_grid.begin(), x_grid.end());
  curves.edf = edf(index, x_grid);
  curves.density = local_time_density(index, x_grid, sigma);
  return curves;
}

double log_likelihood(const Trajectory& traj, const ParametricModel& model,
                      const Theta& theta) {
  if (traj.values.size() < 2) throw validation_error("log_likelihood: empty trajectory");
  const double inv_s2 = 1.0 / (model.sigma() * model.sigma());
  const double gamma = model.gamma();
  double sum_s_dx = 0.0;
  double sum_s2 = 0.0;
  const std::size_t n = traj.values.size() - 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = family_trend(gamma, theta, traj.values[k]);
    sum_s_dx += s * (traj.values[k + 1] - traj.values[k]);
    sum_s2 += s * s;
  }
  return inv_s2 * sum_s_dx - 0.5 * inv_s2 * sum_s2 * traj.dt;
}

namespace {

// A(alpha) = (1/sigma^2) sum g_a(X_k) dX_k,  B(alpha) = (1/sigma^2) sum g_a^2 dt
// with g_a(x) = sgn(x - alpha)|x - alpha|^gamma. The profile likelihood is
// l(alpha, beta) = -beta A - beta^2/2 B.
struct AlphaScore {
  double a_sum;  // A(alpha)
  double b_sum;  // B(alpha)
};

class ScoreEvaluator {
 public:
  ScoreEvaluator(const PathIndex& index, const ParametricModel& model)
      : index_(index), model_(model), inv_s2_(1.0 / (model.sigma() * model.sigma())) {
    const double gamma = model.gamma();
    const Trajectory& traj = index.trajectory();
    const std::size_t n = index.n_steps();
    if (gamma == 1.0) {
      // g_a(x) = x - alpha: both sums are polynomials in alpha.
      double s_xdx = 0.0, s_dx = 0.0, s_xx = 0.0, s_x = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double x = traj.values[k];
        const double dx = traj.values[k + 1] - x;
        s_xdx += x * dx;
        s_dx += dx;
        s_xx += x * x;
        s_x += x;
      }
      sum_x_dx_ = s_xdx;
      sum_dx_ = s_dx;
      sum_xx_dt_ = s_xx * traj.dt;
      sum_x_dt_ = s_x * traj.dt;
    }
  }

  AlphaScore operator()(double alpha) const {
    const double gamma = model_.gamma();
    const Trajectory& traj = index_.trajectory();
    const double dt = traj.dt;
    const double total_time = index_.total_time();
    if (gamma == 1.0) {
      const double a = inv_s2_ * (sum_x_dx_ - alpha * sum_dx_);
      const double b = inv_s2_ * (sum_xx_dt_ - 2.0 * alpha * sum_x_dt_ +
                                  alpha * alpha * total_time);
      return {a, b};
    }
    if (gamma == 0.0) {
      // g_a = sgn(x - alpha): prefix sums over the sorted path.
      const double a = inv_s2_ * index_.signed_increment_sum(alpha);
      const auto xs = index_.sorted_x();
      const auto range = std::equal_range(xs.begin(), xs.end(), alpha);
      const double ties = static_cast<double>(range.second - range.first);
      const double b = inv_s2_ * (total_time - ties * dt);
      return {a, b};
    }
    double a = 0.0, b = 0.0;
    const std::size_t n = index_.n_steps();
    for (std::size_t k = 0; k < n; ++k) {
      const double x = traj.values[k];
      const double g = (x == alpha) ? 0.0 : sgn(x - alpha) * pow_abs(x - alpha, gamma);
      a += g * (traj.values[k + 1] - x);
      b += g * g;
    }
    return {inv_s2_ * a, inv_s2_ * b * dt};
  }

 private:
  const PathIndex& index_;
  const ParametricModel& model_;
  double inv_s2_;
  double sum_x_dx_ = 0.0, sum_dx_ = 0.0, sum_xx_dt_ = 0.0, sum_x_dt_ = 0.0;
};

}  // namespace

ThetaEstimate mle(const PathIndex& index, const ParametricModel& model,
                  const MleOptions& opts) {
  if (model.regime() == GammaRegime::unsupported) {
    throw validation_error("mle: unsupported regime gamma=0.5");
  }
  const ThetaBox& box = model.theta_box();
  ThetaEstimate est;

  if (box.a1 == box.a2 && box.b1 == box.b2) {
    // Degenerate box: nothing to estimate.
    est.theta = Theta{box.a1, box.b1};
    est.boundary_hit_alpha = true;
    est.boundary_hit_beta = true;
    return est;
  }

  const ScoreEvaluator score(index, model);
  const auto beta_hat = [&box](const AlphaScore& s) {
    if (s.b_sum <= 0.0) return box.b1;
    return std::clamp(-s.a_sum / s.b_sum, box.b1, box.b2);
  };
  const auto profile_ll = [&](double alpha) {
    const AlphaScore s = score(alpha);
    const double beta = beta_hat(s);
    return -beta * s.a_sum - 0.5 * beta * beta * s.b_sum;
  };

  const int m = std::max(3, opts.alpha_grid_points);
  double best_alpha = box.a1;
  double best_ll = -HUGE_VAL;
  int best_i = 0;
  double max_b = 0.0;
  if (opts.keep_profile) est.profile.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double alpha = box.a1 + (box.a2 - box.a1) * i / (m - 1);
    const AlphaScore s = score(alpha);
    max_b = std::max(max_b, s.b_sum);
    const double beta = beta_hat(s);
    const double ll = -beta * s.a_sum - 0.5 * beta * beta * s.b_sum;
    if (opts.keep_profile) est.profile.emplace_back(alpha, ll);
    if (ll > best_ll) {
      best_ll = ll;
      best_alpha = alpha;
      best_i = i;
    }
  }
  if (max_b <= 0.0) throw numerical_error("mle: degenerate path (B(alpha) = 0 everywhere)");

  double alpha_hat = best_alpha;
  if (model.gamma() >= 1.0) {
    // Smooth profile: refine inside the bracketing neighbours.
    const double lo = box.a1 + (box.a2 - box.a1) * std::max(0, best_i - 1) / (m - 1);
    const double hi = box.a1 + (box.a2 - box.a1) * std::min(m - 1, best_i + 1) / (m - 1);
    if (hi > lo) {
      const double refined =
          golden_section_max(profile_ll, lo, hi, 1e-10 * std::max(1.0, box.a2 - box.a1));
      if (profile_ll(refined) >= best_ll) alpha_hat = refined;
    }
  }

  const AlphaScore s = score(alpha_hat);
  const double beta = beta_hat(s);
  est.theta = Theta{alpha_hat, beta};
  est.boundary_hit_alpha = (alpha_hat == box.a1 || alpha_hat == box.a2);
  est.boundary_hit_beta = (beta == box.b1 || beta == box.b2);
  return est;
}

ThetaEstimate mle(const Trajectory& traj, const ParametricModel& model,
                  const MleOptions& opts) {
  const PathIndex index(traj);
  return mle(index, model, opts);
}

}  // namespace ergofit
