// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "ergofit/estimators.hpp"
#include "ergofit/limits.hpp"
#include "ergofit/model.hpp"

namespace ergofit {

struct StatisticKind {
  StatFamily family = StatFamily::param_edf;
  StatNorm norm = StatNorm::cvm;

  bool operator==(const StatisticKind&) const = default;
};

// ADF supports the integral norm only (its limit is int w^2); KSIncrement the
// sup norm only (its limit is sup|w|). Throws validation_error otherwise.
void validate_statistic_kind(const StatisticKind& kind);

// "<Family>:<Norm>", e.g. "ParamEDF:CvM".
std::string stat_kind_name(const StatisticKind& kind);
StatisticKind parse_stat_kind(const std::string& text);

struct StatMeta {
  int grid_m = 0;
  double horizon = 0.0;
  double dt = 0.0;
  std::optional<Theta> theta_hat;
  std::string law_id;
};

struct StatValue {
  double value = 0.0;
  StatisticKind kind;
  StatMeta meta;
};

struct StatOptions {
  int grid_m = 400;
  // eq-(nn) statistic is displayed for sigma == 1; optionally weight the
  // increments by 1/sigma(X) as in the ADF statistic.
  bool increment_sigma_weight = false;
};

// Composite-hypothesis statistics (EDF- or density-based, CvM or KS norm),
// computed with the plugged-in estimate theta_hat.
StatValue param_stat(const PathIndex& index, const ParametricModel& model,
                     const ThetaEstimate& theta_hat, const StatisticKind& kind,
                     const StatOptions& opts = {});
StatValue param_stat(const Trajectory& traj, const ParametricModel& model,
                     const ThetaEstimate& theta_hat, const StatisticKind& kind,
                     const StatOptions& opts = {});

// Simple-hypothesis density statistic: CvM is T int (f_hat - f_S0)^2 dF_S0,
// KS is sup_x sqrt(T)|f_hat - f_S0|.
StatValue simple_density_stat(const PathIndex& index, const SimpleModel& model,
                              StatNorm norm, const StatOptions& opts = {});
StatValue simple_density_stat(const Trajectory& traj, const SimpleModel& model,
                              StatNorm norm, const StatOptions& opts = {});

// The ADF statistic: outer dF_S0 integral of the squared normalized inner
// process (1/sqrt(T)) sum 1{X_k < x} (dX_k - S0(X_k) dt)/sigma(X_k).
StatValue adf_stat(const PathIndex& index, const SimpleModel& model,
                   const StatOptions& opts = {});
StatValue adf_stat(const Trajectory& traj, const SimpleModel& model,
                   const StatOptions& opts = {});

// sup-norm statistic over the unweighted increments (eq-(nn) form).
StatValue ks_increment_stat(const PathIndex& index, const SimpleModel& model,
                            const StatOptions& opts = {});
StatValue ks_increment_stat(const Trajectory& traj, const SimpleModel& model,
                            const StatOptions& opts = {});

// Normalizing constant in front of the composite statistics; gamma = 0
// reduces to beta^2 sigma^-2 T (CvM) as in the low-gamma display.
double param_stat_normalization(double gamma, double sigma, double beta_hat,
                                StatNorm norm, double horizon);

// CvM/KS reduction from curves already evaluated on a uniform probability
// grid; exposed so synthetic-curve cases are testable in isolation.
double reduce_probability_grid(std::span<const double> deviations, StatNorm norm);

}  // namespace ergofit
