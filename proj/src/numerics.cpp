// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "ergofit/errors.hpp"

namespace ergofit {
namespace {

// QUADPACK dqk15 nodes and weights (positive half; node 7 is the center).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kWgk[i] * fsum;
    if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * h;
  const double diff = std::abs(kronrod - gauss) * h;
  // QUADPACK-style sharpened estimate; never below machine noise.
  p.error = std::max(diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::abs(p.value), 1e-300), 0.5)),
                     std::abs(p.value) * 1e-16);
  if (!std::isfinite(p.value)) p.error = HUGE_VAL;
  return p;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_panels) {
  QuadratureResult res;
  if (a == b) return res;
  std::priority_queue<Panel> heap;
  Panel first = gk15(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int n_panels = 1;
  while (err > abs_tol && n_panels < max_panels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted
      heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
      err -= worst.error;
      continue;
    }
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n_panels;
  }
  res.value = total;
  res.error = err;
  res.panels = n_panels;
  return res;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_panels) {
  const QuadratureResult r = integrate_adaptive(f, a, b, abs_tol, max_panels);
  if (!(r.error <= abs_tol) || !std::isfinite(r.value)) {
    throw numerical_error("quadrature did not converge: error estimate " +
                          std::to_string(r.error) + " > tol " +
                          std::to_string(abs_tol));
  }
  return r.value;
}

double integrate_breakpoints(const std::function<double(double)>& f,
                             std::span<const double> points, double abs_tol) {
  if (points.size() < 2) throw validation_error("integrate_breakpoints: need at least 2 points");
  double total = 0.0;
  const double tol_each = abs_tol / static_cast<double>(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    total += integrate(f, points[i], points[i + 1], tol_each);
  }
  return total;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw numerical_error("find_root: endpoints do not bracket a root");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * x_tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double x_tol, int max_iter) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

namespace {

// Series for P (valid x < a+1) and continued fraction for Q (valid x >= a+1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / 1e-300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw validation_error("regularized_gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw validation_error("regularized_gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

SampleStats summarize(std::span<const double> xs) {
  SampleStats s;
  if (xs.empty()) return s;
  s.min = s.max = xs[0];
  double m2 = 0.0;
  for (double x : xs) {
    ++s.n;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
    const double d1 = x - s.mean;
    s.mean += d1 / static_cast<double>(s.n);
    m2 += d1 * (x - s.mean);
  }
  s.variance = m2 / static_cast<double>(s.n);
  return s;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw validation_error("quantile_sorted: empty sample");
  if (p <= 0.0 || p >= 1.0) throw validation_error("quantile_sorted: p outside (0,1)");
  const std::size_t n = sorted.size();
  std::size_t k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  k = std::max<std::size_t>(1, std::min(k, n));
  return sorted[k - 1];
}

double two_sample_ks(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw validation_error("two_sample_ks: empty sample");
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double x = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= x) ++i;
    while (j < ys.size() && ys[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double two_sample_ks_critical(double alpha, std::size_t n, std::size_t m) {
  if (alpha <= 0.0 || alpha >= 1.0) throw validation_error("ks critical: alpha outside (0,1)");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace ergofit
