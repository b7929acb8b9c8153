// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ergofit/model.hpp"
#include "ergofit/simulate.hpp"

namespace ergofit {

// Sorted view of a trajectory's left endpoints X_0..X_{n-1} paired with the
// observed increments dX_k. All level-crossing sums used by the estimators and
// statistics reduce to prefix sums in this order, turning each grid evaluation
// into a binary search.
class PathIndex {
 public:
  explicit PathIndex(const Trajectory& traj);

  const Trajectory& trajectory() const { return *traj_; }
  double total_time() const { return total_time_; }
  double dt() const { return dt_; }
  std::size_t n_steps() const { return sorted_x_.size(); }

  // (1/T) int 1{X_t < x} dt, left-endpoint Riemann.
  double edf_below(double x) const;

  // sum over steps of sgn(X_k - x) dX_k (Ito left-endpoint discretization).
  double signed_increment_sum(double x) const;

  // Local time / empirical density via the Tanaka-Meyer identity.
  double local_time(double x) const;

  // Prefix machinery for arbitrary per-step weights w_k: returns cumulative
  // sums in sorted order; prefix_below then gives sum_{X_k < x} w_k.
  std::vector<double> sorted_prefix(std::span<const double> step_weights) const;
  double prefix_below(const std::vector<double>& prefix, double x) const;

  std::span<const double> sorted_x() const { return sorted_x_; }
  std::span<const std::size_t> sort_order() const { return order_; }
  double first() const { return x_first_; }
  double last() const { return x_last_; }

 private:
  const Trajectory* traj_;
  double dt_;
  double total_time_;
  double x_first_;
  double x_last_;
  std::vector<double> sorted_x_;
  std::vector<std::size_t> order_;
  std::vector<double> prefix_dx_;  // cumulative dX in sorted order
};

// F_hat on a grid.
std::vector<double> edf(const Trajectory& traj, std::span<const double> x_grid);
std::vector<double> edf(const PathIndex& index, std::span<const double> x_grid);

// f_hat(x) = Lambda_T(x) / (T sigma(x)^2), clamped at 0 from below.
std::vector<double> local_time_density(const Trajectory& traj,
                                       std::span<const double> x_grid,
                                       const std::function<double(double)>& sigma);
std::vector<double> local_time_density(const PathIndex& index,
                                       std::span<const double> x_grid,
                                       const std::function<double(double)>& sigma);

struct EmpiricalCurves {
  std::vector<double> x_grid;
  std::vector<double> edf;
  std::vector<double> density;
};

EmpiricalCurves empirical_curves(const Trajectory& traj,
                                 std::span<const double> x_grid,
                                 const std::function<double(double)>& sigma);

// Girsanov log-likelihood with left-endpoint sums:
// l(theta) = (1/sigma^2) sum S(theta, X_k) dX_k - (1/(2 sigma^2)) sum S^2 dt.
double log_likelihood(const Trajectory& traj, const ParametricModel& model,
                      const Theta& theta);

struct ThetaEstimate {
  Theta theta;
  bool boundary_hit_alpha = false;
  bool boundary_hit_beta = false;
  // Optional diagnostics: (alpha, profile log-likelihood) pairs.
  std::vector<std::pair<double, double>> profile;
};

struct MleOptions {
  int alpha_grid_points = 2001;
  bool keep_profile = false;
};

// Profile-likelihood MLE. For fixed alpha the score in beta is linear:
// beta_hat(alpha) = clamp(-A/B); alpha then maximized on a dense grid, refined
// by golden-section for gamma >= 1 (the profile is smooth there).
ThetaEstimate mle(const Trajectory& traj, const ParametricModel& model,
                  const MleOptions& opts = {});
ThetaEstimate mle(const PathIndex& index, const ParametricModel& model,
                  const MleOptions& opts = {});

}  // namespace ergofit
