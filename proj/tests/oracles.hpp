// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent test oracles. Everything here recomputes expected values by a
// route different from the implementation under test (direct sums, closed
// forms via the gamma function, alternating series) and must stay that way.
#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace ergofit::oracles {

// E0 |xi|^m under f0(x) = exp(-2|x|^{g+1}/(g+1))/G_g via the gamma function:
// substituting v = c x^{g+1} with c = 2/(g+1) gives
// E|xi|^m = 2 c^{-(m+1)/(g+1)} Gamma((m+1)/(g+1)) / (G_g (g+1)).
inline double abs_moment_closed_form(double gamma, double m) {
  const double gp1 = gamma + 1.0;
  const double c = 2.0 / gp1;
  const double log_g = (gamma / gp1) * std::log(2.0 / gp1) + std::lgamma(1.0 / gp1);
  const double log_val = std::log(2.0) - ((m + 1.0) / gp1) * std::log(c) +
                         std::lgamma((m + 1.0) / gp1) - log_g - std::log(gp1);
  return std::exp(log_val);
}

// P(sup_{0<=t<=1} |w(t)| <= x) by the reflection (alternating) series.
inline double sup_abs_w_cdf(double x) {
  if (x <= 0.0) return 0.0;
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double term = ((k % 2 == 0) ? 1.0 : -1.0) / (2.0 * k + 1.0) *
                        std::exp(-(2.0 * k + 1.0) * (2.0 * k + 1.0) * M_PI * M_PI / (8.0 * x * x));
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return 4.0 / M_PI * sum;
}

// Deterministic Euler recursion for dX = S(X) dt (sigma = 0).
template <typename Drift>
double euler_ode(Drift s, double x0, double total_time, double dt) {
  const int n = static_cast<int>(std::round(total_time / dt));
  double x = x0;
  for (int k = 0; k < n; ++k) x += s(x) * dt;
  return x;
}

// Brute-force EDF: direct O(n) scan over left endpoints.
inline double edf_direct(std::span<const double> values, double dt, double x) {
  const std::size_t n = values.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] < x) acc += dt;
  }
  return acc / (dt * static_cast<double>(n));
}

// Brute-force local time via the Tanaka-Meyer identity with direct sums.
inline double local_time_direct(std::span<const double> values, double x) {
  const std::size_t n = values.size() - 1;
  double ito = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = values[k] - x;
    const double sign = u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0);
    ito += sign * (values[k + 1] - values[k]);
  }
  return std::abs(values[n] - x) - std::abs(values[0] - x) - ito;
}

// Girsanov sums A(alpha), B(alpha) by direct loops (likelihood oracle).
inline std::pair<double, double> likelihood_sums_direct(std::span<const double> values,
                                                        double dt, double sigma,
                                                        double gamma, double alpha) {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double u = values[k] - alpha;
    const double g =
        u == 0.0 ? 0.0 : (u > 0 ? 1.0 : -1.0) * std::pow(std::abs(u), gamma);
    a += g * (values[k + 1] - values[k]);
    b += g * g;
  }
  return {a / (sigma * sigma), b * dt / (sigma * sigma)};
}

}  // namespace ergofit::oracles
