// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergofit/errors.hpp"
#include "ergofit/numerics.hpp"

namespace ergofit {

GammaRegime classify_gamma(double gamma) {
  if (gamma == 0.5) return GammaRegime::unsupported;
  return gamma < 0.5 ? GammaRegime::low_gamma : GammaRegime::high_gamma;
}

std::string regime_name(GammaRegime r) {
  switch (r) {
    case GammaRegime::low_gamma: return "LowGamma";
    case GammaRegime::high_gamma: return "HighGamma";
    default: return "Unsupported";
  }
}

double family_trend(double gamma, const Theta& theta, double x) {
  const double u = x - theta.alpha;
  if (u == 0.0) return 0.0;  // sgn(0) := 0, any gamma
  return -theta.beta * sgn(u) * pow_abs(u, gamma);
}

double family_log_normalizer(double gamma) {
  const double gp1 = gamma + 1.0;
  return (gamma / gp1) * std::log(2.0 / gp1) + std::lgamma(1.0 / gp1);
}

double family_density(double gamma, double sigma, const Theta& theta, double x) {
  const double gp1 = gamma + 1.0;
  const double u = pow_abs(x - theta.alpha, gp1);
  const double log_f = std::log(theta.beta) / gp1 - family_log_normalizer(gamma) -
                       (2.0 / gp1) * std::log(sigma) -
                       2.0 * theta.beta * u / (gp1 * sigma * sigma);
  return std::exp(log_f);
}

double family_cdf(double gamma, double sigma, const Theta& theta, double x) {
  const double gp1 = gamma + 1.0;
  const double u = x - theta.alpha;
  if (u == 0.0) return 0.5;
  const double v = 2.0 * theta.beta * pow_abs(u, gp1) / (gp1 * sigma * sigma);
  // Below alpha the value is Q/2 computed directly, keeping the deep lower
  // tail accurate instead of rounding 0.5 (1 - P) through 1.
  if (u < 0.0) return 0.5 * regularized_gamma_q(1.0 / gp1, v);
  return 0.5 + 0.5 * regularized_gamma_p(1.0 / gp1, v);
}

double family_quantile(double gamma, double sigma, const Theta& theta, double p) {
  if (!(p > 0.0 && p < 1.0)) throw validation_error("invariant_quantile: p outside (0,1)");
  if (p == 0.5) return theta.alpha;
  const double side = sgn(p - 0.5);
  // Bracket the root of F - p on the relevant side, then safeguarded Newton.
  double lo = theta.alpha;
  double hi_off = sigma * sigma / theta.beta + 1.0;
  double hi = theta.alpha + side * hi_off;
  for (int i = 0; i < 200; ++i) {
    const double fq = family_cdf(gamma, sigma, theta, hi);
    if (side > 0 ? fq >= p : fq <= p) break;
    hi_off *= 2.0;
    hi = theta.alpha + side * hi_off;
  }
  double a = std::min(lo, hi), b = std::max(lo, hi);
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double fx = family_cdf(gamma, sigma, theta, x);
    const double err = fx - p;
    if (std::abs(err) <= 1e-12) return x;
    if (err > 0.0) b = x; else a = x;
    const double dens = family_density(gamma, sigma, theta, x);
    double next = dens > 0.0 ? x - err / dens : x;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == x) next = 0.5 * (a + b);
    x = next;
    if (b - a < 1e-15 * std::max(1.0, std::abs(x))) return x;
  }
  return x;
}

ParametricModel::ParametricModel(double gamma, double sigma, ThetaBox theta_box)
    : gamma_(gamma), sigma_(sigma), box_(theta_box), regime_(classify_gamma(gamma)) {
  if (gamma < 0.0) throw validation_error("make_family: gamma must be >= 0");
  if (!(sigma > 0.0)) throw validation_error("make_family: sigma must be > 0");
  if (!box_.valid()) {
    throw validation_error("make_family: invalid theta box (need a1 < a2 and 0 < b1 < b2)");
  }
}

double ParametricModel::trend(const Theta& theta, double x) const {
  return family_trend(gamma_, theta, x);
}

double ParametricModel::invariant_density(const Theta& theta, double x) const {
  return family_density(gamma_, sigma_, theta, x);
}

double ParametricModel::invariant_cdf(const Theta& theta, double x) const {
  return family_cdf(gamma_, sigma_, theta, x);
}

double ParametricModel::invariant_quantile(const Theta& theta, double p) const {
  return family_quantile(gamma_, sigma_, theta, p);
}

double ParametricModel::standardize(const Theta& theta, double x) const {
  const double gp1 = gamma_ + 1.0;
  return std::pow(theta.beta, 1.0 / gp1) * std::pow(sigma_, -2.0 / gp1) * (x - theta.alpha);
}

double ParametricModel::time_rescale_factor(const Theta& theta) const {
  const double gp1 = gamma_ + 1.0;
  return std::pow(theta.beta, 2.0 / gp1) * std::pow(sigma_, 2.0 * (gamma_ - 1.0) / gp1);
}

double ParametricModel::tail_radius(const Theta& theta, double tail_mass) const {
  const double q = invariant_quantile(theta, 1.0 - 0.5 * tail_mass);
  return q - theta.alpha;
}

ParametricModel make_family(double gamma, double sigma, const ThetaBox& box) {
  return ParametricModel(gamma, sigma, box);
}

double stationary_abs_moment(double gamma, double m) {
  if (gamma < 0.0) throw validation_error("stationary_abs_moment: gamma must be >= 0");
  if (m <= -1.0) {
    throw validation_error("stationary_abs_moment: |x|^m is not integrable against f0 for m <= -1");
  }
  const double gp1 = gamma + 1.0;
  // Truncate where the integrand's log drops ~45 below 0.
  double radius = 1.0;
  const double log_g = family_log_normalizer(gamma);
  for (int i = 0; i < 100; ++i) {
    const double log_tail = -2.0 * pow_abs(radius, gp1) / gp1 + m * std::log(radius) - log_g;
    if (log_tail < -45.0) break;
    radius *= 2.0;
  }
  const auto integrand = [&](double x) {
    return pow_abs(x, m) * standard_density(gamma, x);
  };
  // m < 0 has an integrable singularity at 0; the adaptive panels refine into it.
  return 2.0 * integrate(integrand, 0.0, radius, 0.5e-10, 20000);
}

StationaryMoments stationary_moments(double gamma) {
  StationaryMoments mom;
  mom.b = stationary_abs_moment(gamma, 2.0 * gamma);
  mom.a = gamma > 0.5 ? stationary_abs_moment(gamma, 2.0 * gamma - 2.0)
                      : std::numeric_limits<double>::quiet_NaN();
  return mom;
}

// ---------------------------------------------------------------------------
// SimpleModel
// ---------------------------------------------------------------------------

namespace {

// Cubic Hermite on [x0, x1] given values and derivatives at both ends.
inline double hermite(double x, double x0, double x1, double f0, double f1,
                      double d0, double d1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return f0 * (2 * t3 - 3 * t2 + 1) + d0 * h * (t3 - 2 * t2 + t) +
         f1 * (-2 * t3 + 3 * t2) + d1 * h * (t3 - t2);
}

}  // namespace

SimpleModel::SimpleModel(std::function<double(double)> drift,
                         std::function<double(double)> diffusion,
                         Interval truncation, std::string spec_id,
                         SimpleModelOptions opts)
    : drift_(std::move(drift)),
      sigma_(std::move(diffusion)),
      trunc_(truncation),
      spec_id_(std::move(spec_id)),
      opts_(opts) {
  if (!(trunc_.lo < trunc_.hi)) throw validation_error("simple model: truncation lo >= hi");
  if (opts_.grid_cells < 16) throw validation_error("simple model: grid too coarse");

  const int n = opts_.grid_cells;
  const double h = trunc_.width() / n;
  nodes_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = trunc_.lo + h * i;
    nodes_[i] = x;
    const double s = sigma_(x);
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw validation_error("simple model: sigma(x) must be finite and > 0 on the truncation");
    }
    if (!std::isfinite(drift_(x))) {
      throw validation_error("simple model: drift not finite on the truncation");
    }
  }
  const auto s2 = [this](double y) {
    const double s = sigma_(y);
    return 2.0 * drift_(y) / (s * s);
  };

  // Hermite slopes (phi' = 2S/sigma^2) taken one-sided from inside each cell,
  // so a drift kink sitting on a node cannot poison the interpolant.
  dphi_left_.resize(n);
  dphi_right_.resize(n);
  {
    const double eps = 1e-7 * h;
    for (int i = 0; i < n; ++i) {
      dphi_left_[i] = s2(nodes_[i] + eps);
      dphi_right_[i] = s2(nodes_[i + 1] - eps);
    }
  }

  // Exponent phi(x) = 2 int_anchor^x S/sigma^2, anchored at 0 when that lies
  // inside the truncation (else at the midpoint), then shifted so its maximum
  // is 0: exp(phi) stays representable for arbitrarily peaked densities and
  // absolute quadrature tolerances are meaningful.
  const double anchor = (trunc_.lo < 0.0 && trunc_.hi > 0.0) ? 0.0 : 0.5 * (trunc_.lo + trunc_.hi);
  phi_nodes_.assign(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    phi_nodes_[i] = phi_nodes_[i - 1] +
                    integrate(s2, nodes_[i - 1], nodes_[i], 1e-12, 600);
  }
  {
    const int j = std::min<int>(n - 1, std::max<int>(0, static_cast<int>((anchor - trunc_.lo) / h)));
    const double phi_anchor =
        phi_nodes_[j] + integrate(s2, nodes_[j], anchor, 1e-12, 600);
    for (double& v : phi_nodes_) v -= phi_anchor;
  }
  for (double v : phi_nodes_) {
    if (!std::isfinite(v)) {
      throw numerical_error("simple model: drift integral diverges on the truncation");
    }
  }
  exponent_shift_ = *std::max_element(phi_nodes_.begin(), phi_nodes_.end());
  for (double& v : phi_nodes_) v -= exponent_shift_;

  // Cells where the cubic misses the exponent at midpoint (drift kinks with
  // unbounded curvature) fall back to direct quadrature.
  cell_rough_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const double mid = 0.5 * (nodes_[i] + nodes_[i + 1]);
    const double interp = hermite(mid, nodes_[i], nodes_[i + 1], phi_nodes_[i],
                                  phi_nodes_[i + 1], dphi_left_[i], dphi_right_[i]);
    const double exact = phi_nodes_[i] + integrate(s2, nodes_[i], mid, 1e-13, 600);
    if (std::abs(interp - exact) > 1e-11) cell_rough_[i] = 1;
  }

  // Cumulative unnormalized mass on the cached grid.
  cum_mass_.assign(n + 1, 0.0);
  const auto g = [this](double x) { return unnormalized_density(x); };
  for (int i = 1; i <= n; ++i) {
    const double cell = integrate(g, nodes_[i - 1], nodes_[i], 1e-13, 200);
    cum_mass_[i] = cum_mass_[i - 1] + cell;
  }
  normalizer_ = cum_mass_[n];
  if (!(normalizer_ > 0.0) || !std::isfinite(normalizer_)) {
    throw numerical_error("simple model: invariant density not normalizable on truncation");
  }

  // Mass escaping the truncation window, estimated on a widened interval. Uses
  // the raw drift/diffusion outside the cached grid (same shifted exponent).
  {
    const double pad = 0.25 * trunc_.width();
    const auto raw_g = [&](double x) {
      const double s = sigma_(x);
      if (!(s > 0.0)) return 0.0;
      double phi_x;
      if (x < trunc_.lo) {
        phi_x = phi_nodes_.front() - integrate(s2, x, trunc_.lo, 1e-10, 400);
      } else {
        phi_x = phi_nodes_.back() + integrate(s2, trunc_.hi, x, 1e-10, 400);
      }
      return std::exp(std::min(phi_x, 700.0)) / (s * s);
    };
    double extra = 0.0;
    const int k = 64;
    for (int side = 0; side < 2; ++side) {
      const double from = side == 0 ? trunc_.lo - pad : trunc_.hi;
      double prev = raw_g(side == 0 ? from : trunc_.hi);
      const double step = pad / k;
      for (int i = 1; i <= k; ++i) {
        const double x = from + step * i;
        const double cur = raw_g(x);
        extra += 0.5 * (prev + cur) * step;
        prev = cur;
      }
    }
    if (extra / (normalizer_ + extra) > opts_.mass_tol) {
      throw numerical_error(
          "simple model: invariant mass outside the truncation exceeds tolerance; "
          "widen the truncation interval");
    }
  }

  // A0-style tail sign check: sgn(y) S0(y)/sigma(y)^2 negative beyond the radius.
  {
    double radius = opts_.tail_sign_radius;
    if (radius <= 0.0) radius = 0.6 * std::max(std::abs(trunc_.lo), std::abs(trunc_.hi));
    tail_check_ok_ = true;
    const int k = 32;
    for (int i = 0; i <= k; ++i) {
      const double xr = radius + (trunc_.hi - radius) * i / k;
      if (xr > radius && xr <= trunc_.hi && sgn(xr) * s2(xr) >= 0.0) tail_check_ok_ = false;
      const double xl = -radius + (trunc_.lo + radius) * i / k;
      if (xl < -radius && xl >= trunc_.lo && sgn(xl) * s2(xl) >= 0.0) tail_check_ok_ = false;
    }
  }
}

double SimpleModel::phi(double x) const {
  const int n = opts_.grid_cells;
  const double h = trunc_.width() / n;
  int j = static_cast<int>((x - trunc_.lo) / h);
  j = std::min(n - 1, std::max(0, j));
  if (cell_rough_[static_cast<std::size_t>(j)]) {
    const auto s2 = [this](double y) {
      const double s = sigma_(y);
      return 2.0 * drift_(y) / (s * s);
    };
    return phi_nodes_[static_cast<std::size_t>(j)] + integrate(s2, nodes_[static_cast<std::size_t>(j)], x, 1e-13, 600);
  }
  return hermite(x, nodes_[j], nodes_[j + 1], phi_nodes_[j], phi_nodes_[j + 1],
                 dphi_left_[j], dphi_right_[j]);
}

double SimpleModel::unnormalized_density(double x) const {
  const double s = sigma_(x);
  return std::exp(phi(x)) / (s * s);
}

double SimpleModel::normalizer() const { return std::exp(log_normalizer()); }

double SimpleModel::log_normalizer() const { return exponent_shift_ + std::log(normalizer_); }

double SimpleModel::density(double x) const {
  if (x < trunc_.lo || x > trunc_.hi) return 0.0;
  return unnormalized_density(x) / normalizer_;
}

double SimpleModel::partial_mass(int cell, double x) const {
  const auto g = [this](double y) { return unnormalized_density(y); };
  return integrate(g, nodes_[cell], x, 1e-13, 200);
}

double SimpleModel::cdf(double x) const {
  if (x <= trunc_.lo) return 0.0;
  if (x >= trunc_.hi) return 1.0;
  const int n = opts_.grid_cells;
  const double h = trunc_.width() / n;
  int j = static_cast<int>((x - trunc_.lo) / h);
  j = std::min(n - 1, std::max(0, j));
  return std::min(1.0, (cum_mass_[j] + partial_mass(j, x)) / normalizer_);
}

double SimpleModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw validation_error("quantile: p outside (0,1)");
  const double target = p * normalizer_;
  const auto it = std::lower_bound(cum_mass_.begin(), cum_mass_.end(), target);
  int j = static_cast<int>(it - cum_mass_.begin());
  j = std::min(opts_.grid_cells - 1, std::max(0, j - 1));
  double a = nodes_[j], b = nodes_[j + 1];
  double x = 0.5 * (a + b);
  for (int iter = 0; iter < 100; ++iter) {
    const double err = cdf(x) - p;
    if (std::abs(err) <= 1e-11) return x;
    if (err > 0.0) b = x; else a = x;
    const double dens = density(x);
    double next = dens > 0.0 ? x - err / dens : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    x = next;
    if (b - a < 1e-15 * std::max(1.0, std::abs(x))) return x;
  }
  return x;
}

std::uint64_t SimpleModel::law_hash() const {
  // FNV-1a over the canonical spec id plus grid shape.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mixin = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mixin(spec_id_);
  mixin("|" + std::to_string(trunc_.lo) + ":" + std::to_string(trunc_.hi) + "|" +
        std::to_string(opts_.grid_cells));
  return h;
}

SimpleModel make_simple_model(std::function<double(double)> drift,
                              std::function<double(double)> diffusion,
                              Interval truncation, std::string spec_id,
                              SimpleModelOptions opts) {
  return SimpleModel(std::move(drift), std::move(diffusion), truncation,
                     std::move(spec_id), opts);
}

}  // namespace ergofit
