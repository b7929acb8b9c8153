// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ergofit {

// ---------------------------------------------------------------------------
// Parametric family: dX = -beta sgn(X - alpha)|X - alpha|^gamma dt + sigma dW.
// ---------------------------------------------------------------------------

struct Theta {
  double alpha = 0.0;
  double beta = 1.0;
};

struct ThetaBox {
  double a1 = -1.0, a2 = 1.0;  // alpha range
  double b1 = 0.5, b2 = 2.0;   // beta range, b1 > 0

  // Degenerate (single-point) boxes are allowed: estimation then just returns
  // the pinned theta.
  bool valid() const { return a1 <= a2 && 0.0 < b1 && b1 <= b2; }
  bool contains(const Theta& t) const {
    return t.alpha >= a1 && t.alpha <= a2 && t.beta >= b1 && t.beta <= b2;
  }
};

enum class GammaRegime { low_gamma, high_gamma, unsupported };

// gamma in [0,1/2) -> low_gamma; gamma > 1/2 -> high_gamma; gamma == 1/2 is
// unsupported (no usable MLE theory there).
GammaRegime classify_gamma(double gamma);
std::string regime_name(GammaRegime r);

// Free-function closed forms, usable without a box (the limit samplers need
// the standard law f0 = f(theta0,.) with theta0 = (0,1), sigma = 1).
double family_trend(double gamma, const Theta& theta, double x);
double family_density(double gamma, double sigma, const Theta& theta, double x);
double family_cdf(double gamma, double sigma, const Theta& theta, double x);
double family_quantile(double gamma, double sigma, const Theta& theta, double p);
double family_log_normalizer(double gamma);  // log G_gamma

inline double standard_density(double gamma, double y) {
  return family_density(gamma, 1.0, Theta{0.0, 1.0}, y);
}
inline double standard_cdf(double gamma, double y) {
  return family_cdf(gamma, 1.0, Theta{0.0, 1.0}, y);
}
inline double standard_quantile(double gamma, double p) {
  return family_quantile(gamma, 1.0, Theta{0.0, 1.0}, p);
}

class ParametricModel {
 public:
  ParametricModel(double gamma, double sigma, ThetaBox theta_box);

  double gamma() const { return gamma_; }
  double sigma() const { return sigma_; }
  const ThetaBox& theta_box() const { return box_; }
  GammaRegime regime() const { return regime_; }

  double trend(const Theta& theta, double x) const;
  double invariant_density(const Theta& theta, double x) const;
  double invariant_cdf(const Theta& theta, double x) const;
  double invariant_quantile(const Theta& theta, double p) const;

  // y = beta^{1/(gamma+1)} sigma^{-2/(gamma+1)} (x - alpha), so that
  // F(theta, x) = F0(y).
  double standardize(const Theta& theta, double x) const;
  // T_*/T = beta^{2/(gamma+1)} sigma^{2(gamma-1)/(gamma+1)}.
  double time_rescale_factor(const Theta& theta) const;

  // L' such that the invariant mass outside [alpha-L', alpha+L'] < tail_mass.
  double tail_radius(const Theta& theta, double tail_mass) const;

 private:
  double gamma_;
  double sigma_;
  ThetaBox box_;
  GammaRegime regime_;
};

ParametricModel make_family(double gamma, double sigma, const ThetaBox& box);

// ---------------------------------------------------------------------------
// Stationary moments of the standard law: a = E0|xi|^{2 gamma - 2},
// b = E0|xi|^{2 gamma}.
// ---------------------------------------------------------------------------

struct StationaryMoments {
  double a = 0.0;  // NaN when gamma <= 1/2 (non-integrable / unused)
  double b = 0.0;
};

// E0 |xi|^m by adaptive quadrature against f0; m <= -1 is non-integrable and
// raises a validation error.
double stationary_abs_moment(double gamma, double m);
StationaryMoments stationary_moments(double gamma);

// ---------------------------------------------------------------------------
// Simple-hypothesis model: known drift S0 and diffusion sigma with an
// invariant law derived numerically on a truncated support.
// ---------------------------------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct SimpleModelOptions {
  int grid_cells = 2000;          // resolution of the cached exponent/mass grid
  double tail_sign_radius = 0.0;  // 0 = auto: 0.6 * max(|lo|, |hi|)
  double mass_tol = 1e-8;         // max invariant mass allowed outside truncation
};

class SimpleModel {
 public:
  SimpleModel(std::function<double(double)> drift,
              std::function<double(double)> diffusion, Interval truncation,
              std::string spec_id = "custom", SimpleModelOptions opts = {});

  double drift(double x) const { return drift_(x); }
  double diffusion(double x) const { return sigma_(x); }

  double density(double x) const;   // f_{S0}; 0 outside truncation
  double cdf(double x) const;       // clamped to [0,1] outside truncation
  double quantile(double p) const;  // p in (0,1)

  // G(S0) with the exponent anchored at 0 (or the midpoint when 0 lies outside
  // the truncation). May overflow to +inf for extremely peaked densities; the
  // internal computation works with a max-shifted exponent and never does.
  double normalizer() const;
  double log_normalizer() const;

  bool tail_check_ok() const { return tail_check_ok_; }
  const Interval& truncation() const { return trunc_; }
  const std::string& spec_id() const { return spec_id_; }
  std::uint64_t law_hash() const;

 private:
  double phi(double x) const;  // cubic-Hermite interpolated exponent integral
  double unnormalized_density(double x) const;
  double partial_mass(int cell, double x) const;

  std::function<double(double)> drift_;
  std::function<double(double)> sigma_;
  Interval trunc_;
  std::string spec_id_;
  SimpleModelOptions opts_;

  std::vector<double> nodes_;
  std::vector<double> phi_nodes_;
  std::vector<double> dphi_left_;   // phi' just inside each cell's left edge
  std::vector<double> dphi_right_;  // phi' just inside each cell's right edge
  std::vector<char> cell_rough_;    // interpolation unreliable; quadrature instead
  std::vector<double> cum_mass_;  // unnormalized (shifted-exponent) mass from lo to node i
  double normalizer_ = 0.0;       // in shifted-exponent units
  double exponent_shift_ = 0.0;   // max of the anchored exponent over the grid
  bool tail_check_ok_ = true;
};

SimpleModel make_simple_model(std::function<double(double)> drift,
                              std::function<double(double)> diffusion,
                              Interval truncation, std::string spec_id = "custom",
                              SimpleModelOptions opts = {});

}  // namespace ergofit
