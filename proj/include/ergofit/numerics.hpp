// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ergofit {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// |x|^p with fast paths for the exponents the family actually uses.
inline double pow_abs(double x, double p) {
  const double a = x < 0.0 ? -x : x;
  if (p == 1.0) return a;
  if (p == 0.0) return 1.0;
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  return __builtin_pow(a, p);
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (G7,K15) quadrature.
//
// Globally adaptive: panels are kept in a heap ordered by error estimate and
// the worst panel is bisected until the total estimate meets abs_tol. Handles
// integrable endpoint singularities by recursing toward them.
// ---------------------------------------------------------------------------

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // final error estimate
  int panels = 0;
};

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_panels = 4000);

// Convenience wrapper; throws numerical_error if the tolerance is not met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_panels = 4000);

// Integration with interior breakpoints (e.g. a kink made a panel boundary).
double integrate_breakpoints(const std::function<double(double)>& f,
                             std::span<const double> points, double abs_tol);

// ---------------------------------------------------------------------------
// Root finding and 1-d maximization.
// ---------------------------------------------------------------------------

// Bracketed root of f on [lo, hi] (f(lo), f(hi) of opposite sign): Brent.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol = 1e-13, int max_iter = 200);

// Golden-section maximization of f on [lo, hi] for unimodal f.
double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double x_tol, int max_iter = 200);

// ---------------------------------------------------------------------------
// Special functions.
// ---------------------------------------------------------------------------

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly
// in the far tail so values down to the underflow threshold stay accurate.
double regularized_gamma_q(double a, double x);

// ---------------------------------------------------------------------------
// Sample statistics.
// ---------------------------------------------------------------------------

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance (denominator n)
  double min = 0.0;
  double max = 0.0;
};

SampleStats summarize(std::span<const double> xs);

// p-quantile of a sorted ascending sample: order statistic ceil(p*n), 1-based.
double quantile_sorted(std::span<const double> sorted, double p);

// Two-sample Kolmogorov-Smirnov distance sup|F1 - F2| (inputs need not be
// sorted; copies are made).
double two_sample_ks(std::span<const double> a, std::span<const double> b);

// Asymptotic two-sample critical value c(alpha)*sqrt((n+m)/(n*m)).
double two_sample_ks_critical(double alpha, std::size_t n, std::size_t m);

}  // namespace ergofit
