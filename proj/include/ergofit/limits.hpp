// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergofit/model.hpp"
#include "ergofit/rng.hpp"

namespace ergofit {

enum class StatFamily { param_edf, param_density, simple_density, adf, ks_increment };
enum class StatNorm { cvm, ks };

std::string stat_family_name(StatFamily f);
std::string stat_norm_name(StatNorm n);
StatFamily parse_stat_family(const std::string& s);
StatNorm parse_stat_norm(const std::string& s);

// Spatial discretization of the limit-field samplers.
struct LimitGrid {
  double half_width = 0.0;  // L: z-cells cover [-L, L] (or the model support)
  double dz = 0.0;
  int m_y = 400;  // quantile-spaced evaluation grid size

  bool operator==(const LimitGrid&) const = default;
};

// L such that the f0 tail mass outside [-L, L] is below tail_mass, with
// dz = 0.005 L and m_y = 400.
LimitGrid default_param_limit_grid(double gamma, double tail_mass = 1e-8);
LimitGrid default_simple_limit_grid(const SimpleModel& model, double tail_mass = 1e-8);

// Sampler configuration persisted with calibration tables; a table computed
// under one grid is invalid for a sampler configured with another.
struct GridMeta {
  std::optional<LimitGrid> field;  // spatial samplers
  std::optional<int> n_steps;      // Wiener functional samplers

  bool operator==(const GridMeta&) const = default;
};

// ---------------------------------------------------------------------------
// Composite-hypothesis limit fields (Phi, Phi~, Pi, Psi -> eta0, zeta0),
// all computed from one shared two-sided Wiener increment vector.
// ---------------------------------------------------------------------------

struct LimitField {
  std::vector<double> y_grid;
  std::vector<double> phi;        // EDF building block
  std::vector<double> phi_tilde;  // density building block
  std::vector<double> eta0;       // EDF-statistic field
  std::vector<double> zeta0;      // density-statistic field
  double pi = 0.0;                // 0 in the low-gamma regime (structurally absent)
  double psi = 0.0;
  double gamma = 0.0;
  GammaRegime regime = GammaRegime::high_gamma;
};

class ParamLimitSampler {
 public:
  explicit ParamLimitSampler(double gamma);
  ParamLimitSampler(double gamma, const LimitGrid& grid);

  LimitField draw_field(RngStream& rng) const;
  // Deterministic assembly from given increments (cell i carries dW_i); used
  // by coupling tests and by draw_field itself.
  LimitField field_from_increments(std::span<const double> increments) const;

  // CvM reduces by int (.)^2 dF0 on the quantile grid; KS by sup |.|.
  double reduce(const LimitField& field, StatFamily family, StatNorm norm) const;
  double draw(StatFamily family, StatNorm norm, RngStream& rng) const;

  double gamma() const { return gamma_; }
  const LimitGrid& grid() const { return grid_; }
  std::size_t n_cells() const { return z_mid_.size(); }
  double moment_a() const { return a_; }
  double moment_b() const { return b_; }

 private:
  double gamma_;
  GammaRegime regime_;
  LimitGrid grid_;
  double a_ = 0.0;
  double b_ = 0.0;
  // static per-cell tables (midpoint evaluation)
  std::vector<double> z_mid_;
  std::vector<double> f0_cell_;
  std::vector<double> cdf_cell_;
  std::vector<double> inv_sqrt_f0_;
  std::vector<double> pi_weight_;
  std::vector<double> psi_weight_;
  // evaluation grid
  std::vector<double> y_grid_;
  std::vector<double> f0_y_;
  std::vector<double> cdf_y_;
  std::vector<std::size_t> split_;  // cells with midpoint <= y_j
};

// ---------------------------------------------------------------------------
// Simple-hypothesis limit field zeta(S0, x).
// ---------------------------------------------------------------------------

class SimpleLimitSampler {
 public:
  explicit SimpleLimitSampler(const SimpleModel& model);
  SimpleLimitSampler(const SimpleModel& model, const LimitGrid& grid);

  std::vector<double> field_from_increments(std::span<const double> increments) const;
  double reduce(std::span<const double> zeta, StatNorm norm) const;
  double draw(StatNorm norm, RngStream& rng) const;

  const LimitGrid& grid() const { return grid_; }
  std::size_t n_cells() const { return z_mid_.size(); }
  std::span<const double> x_grid() const { return x_grid_; }

 private:
  LimitGrid grid_;
  double dz_ = 0.0;
  std::vector<double> z_mid_;
  std::vector<double> cdf_cell_;
  std::vector<double> weight_;  // 1 / (sigma(z) sqrt(f(z)))
  std::vector<double> x_grid_;
  std::vector<double> f_x_;
  std::vector<std::size_t> split_;
};

// ---------------------------------------------------------------------------
// Wiener functionals int_0^1 w(t)^2 dt and sup_{[0,1]} |w(t)|.
// ---------------------------------------------------------------------------

class WienerFunctionalSampler {
 public:
  enum class Kind { int_sq, sup_abs };

  explicit WienerFunctionalSampler(Kind kind, int n_steps = 1000);
  double draw(RngStream& rng) const;
  int n_steps() const { return n_steps_; }
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
  int n_steps_;
};

// ---------------------------------------------------------------------------
// Law registry: stable law_id strings addressing every limit sampler.
//   Delta:gamma=<g>      composite EDF CvM         Delta_sup:gamma=<g>  (KS)
//   delta:gamma=<g>      composite density CvM     delta_sup:gamma=<g>  (KS)
//   delta_S0:<hash>      simple density CvM        delta_S0_sup:<hash>  (KS)
//   int_w2               ADF CvM                   sup_abs_w            (KS)
// ---------------------------------------------------------------------------

std::string param_law_id(StatFamily family, StatNorm norm, double gamma);
std::string simple_law_id(const SimpleModel& model, StatNorm norm);
std::string w_functional_law_id(WienerFunctionalSampler::Kind kind);

class LimitLaw {
 public:
  virtual ~LimitLaw() = default;
  virtual double draw(RngStream& rng) const = 0;
  virtual GridMeta grid_meta() const = 0;
  const std::string& law_id() const { return law_id_; }

 protected:
  explicit LimitLaw(std::string law_id) : law_id_(std::move(law_id)) {}

 private:
  std::string law_id_;
};

// Resolves built-in law ids (param fields and Wiener functionals). Simple-
// hypothesis laws need the model and are built with make_simple_limit_law.
std::unique_ptr<LimitLaw> make_limit_law(const std::string& law_id);
std::unique_ptr<LimitLaw> make_limit_law(const std::string& law_id, const LimitGrid& grid);
std::unique_ptr<LimitLaw> make_limit_law(const std::string& law_id, int w_n_steps);
std::unique_ptr<LimitLaw> make_simple_limit_law(const SimpleModel& model, StatNorm norm);
std::unique_ptr<LimitLaw> make_simple_limit_law(const SimpleModel& model, StatNorm norm,
                                                const LimitGrid& grid);

// n i.i.d. draws on streams (seed, 0..n-1), evaluated in parallel; the result
// is ordered by stream id and independent of scheduling.
std::vector<double> draw_limit_samples(const LimitLaw& law, int n, std::uint64_t seed);

}  // namespace ergofit
