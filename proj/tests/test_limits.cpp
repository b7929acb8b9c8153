// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ergofit/errors.hpp"
#include "ergofit/limits.hpp"
#include "ergofit/model.hpp"
#include "ergofit/numerics.hpp"
#include "ergofit/parallel.hpp"
#include "ergofit/rng.hpp"
#include "oracles.hpp"

using namespace ergofit;

namespace {

// Direct double-loop assembly of the limit fields from given increments;
// independent of the prefix/suffix implementation in the sampler.
struct DirectFields {
  std::vector<double> phi, phi_tilde, eta0, zeta0;
  double pi = 0.0, psi = 0.0;
};

DirectFields direct_fields(double gamma, std::span<const double> z_mid,
                           std::span<const double> y_grid, std::span<const double> dw) {
  const double gp1 = gamma + 1.0;
  const StationaryMoments mom = stationary_moments(gamma);
  const bool high = classify_gamma(gamma) == GammaRegime::high_gamma;
  DirectFields out;
  for (std::size_t i = 0; i < z_mid.size(); ++i) {
    const double z = z_mid[i];
    const double f0 = standard_density(gamma, z);
    out.psi += sgn(z) * pow_abs(z, gamma) * std::sqrt(f0) * dw[i];
    if (high) out.pi += pow_abs(z, gamma - 1.0) * std::sqrt(f0) * dw[i];
  }
  out.phi.resize(y_grid.size());
  out.phi_tilde.resize(y_grid.size());
  out.eta0.resize(y_grid.size());
  out.zeta0.resize(y_grid.size());
  for (std::size_t j = 0; j < y_grid.size(); ++j) {
    const double y = y_grid[j];
    const double f0y = standard_density(gamma, y);
    const double cdf_y = standard_cdf(gamma, y);
    double phi = 0.0, phi_tilde = 0.0;
    for (std::size_t i = 0; i < z_mid.size(); ++i) {
      const double z = z_mid[i];
      const double f0z = standard_density(gamma, z);
      const double cdf_z = standard_cdf(gamma, z);
      phi += 2.0 * (cdf_z * cdf_y - standard_cdf(gamma, std::min(z, y))) / std::sqrt(f0z) * dw[i];
      phi_tilde += 2.0 * (cdf_z - (z > y ? 1.0 : 0.0)) / std::sqrt(f0z) * dw[i];
    }
    const double pi_c = high ? out.pi / (gamma * mom.a) : 0.0;
    const double psi_c = out.psi / (gp1 * mom.b);
    out.phi[j] = phi;
    out.phi_tilde[j] = phi_tilde;
    out.eta0[j] = phi + pi_c * f0y + y * psi_c * f0y;
    double bracket = phi_tilde + (1.0 - 2.0 * pow_abs(y, gp1)) * psi_c;
    if (high) bracket -= 2.0 * sgn(y) * pow_abs(y, gamma) * pi_c;
    out.zeta0[j] = bracket * f0y;
  }
  return out;
}

}  // namespace

TEST_SUITE("limits") {

TEST_CASE("zero increments give identically zero fields and statistics") {
  const ParamLimitSampler sampler(1.0);
  const std::vector<double> zeros(sampler.n_cells(), 0.0);
  const LimitField field = sampler.field_from_increments(zeros);
  CHECK(field.pi == 0.0);
  CHECK(field.psi == 0.0);
  for (double v : field.eta0) CHECK(v == 0.0);
  for (double v : field.zeta0) CHECK(v == 0.0);
  CHECK(sampler.reduce(field, StatFamily::param_edf, StatNorm::cvm) == 0.0);
  CHECK(sampler.reduce(field, StatFamily::param_density, StatNorm::ks) == 0.0);

  const SimpleModel ou([](double x) { return -x; }, [](double) { return 1.0; }, Interval{-8, 8},
                       "ou-lim");
  const SimpleLimitSampler ss(ou);
  const std::vector<double> z2(ss.n_cells(), 0.0);
  for (double v : ss.field_from_increments(z2)) CHECK(v == 0.0);
}

TEST_CASE("shared-increment coupling: fields equal the direct double-loop sums") {
  for (double gamma : {0.0, 1.0, 2.0}) {
    LimitGrid grid;
    grid.half_width = 3.0;
    grid.dz = 0.25;  // few cells so the O(n m) oracle stays cheap
    grid.m_y = 17;
    const ParamLimitSampler sampler(gamma, grid);
    RngStream rng(404, 7);
    std::vector<double> dw(sampler.n_cells());
    for (auto& v : dw) v = 0.5 * rng.normal();

    const LimitField field = sampler.field_from_increments(dw);
    // reconstruct the z midpoints the sampler used
    std::vector<double> z_mid(sampler.n_cells());
    const double dz = sampler.grid().dz;
    for (std::size_t i = 0; i < z_mid.size(); ++i) {
      z_mid[i] = -sampler.grid().half_width + dz * (static_cast<double>(i) + 0.5);
    }
    const DirectFields want = direct_fields(gamma, z_mid, field.y_grid, dw);
    CHECK(field.psi == doctest::Approx(want.psi).epsilon(1e-12));
    if (classify_gamma(gamma) == GammaRegime::high_gamma) {
      CHECK(field.pi == doctest::Approx(want.pi).epsilon(1e-12));
    }
    for (std::size_t j = 0; j < field.y_grid.size(); ++j) {
      CHECK(field.phi[j] == doctest::Approx(want.phi[j]).epsilon(1e-10));
      CHECK(field.phi_tilde[j] == doctest::Approx(want.phi_tilde[j]).epsilon(1e-10));
      CHECK(field.eta0[j] == doctest::Approx(want.eta0[j]).epsilon(1e-10));
      CHECK(field.zeta0[j] == doctest::Approx(want.zeta0[j]).epsilon(1e-10));
    }
  }
}

TEST_CASE("low gamma: pi is structurally absent") {
  LimitGrid grid;
  grid.half_width = 5.0;
  grid.dz = 0.5;
  grid.m_y = 9;
  const ParamLimitSampler sampler(0.0, grid);
  RngStream rng(11, 3);
  std::vector<double> dw(sampler.n_cells());
  for (auto& v : dw) v = rng.normal();
  const LimitField field = sampler.field_from_increments(dw);
  CHECK(field.pi == 0.0);
  CHECK(field.regime == GammaRegime::low_gamma);
  // assembling by hand without any pi term reproduces the sampler
  std::vector<double> z_mid(sampler.n_cells());
  for (std::size_t i = 0; i < z_mid.size(); ++i) {
    z_mid[i] = -sampler.grid().half_width + sampler.grid().dz * (static_cast<double>(i) + 0.5);
  }
  const DirectFields want = direct_fields(0.0, z_mid, field.y_grid, dw);
  for (std::size_t j = 0; j < field.y_grid.size(); ++j) {
    CHECK(field.eta0[j] == doctest::Approx(want.eta0[j]).epsilon(1e-10));
  }
}

TEST_CASE("unsupported regime is refused") {
  CHECK_THROWS_AS(ParamLimitSampler(0.5), validation_error);
  CHECK_THROWS_AS(make_limit_law("Delta:gamma=0.5"), validation_error);
}

TEST_CASE("ito isometries of the building blocks") {
  for (double gamma : {0.0, 1.0}) {
    const ParamLimitSampler sampler(gamma);
    const int n = 100000;
    std::vector<double> psi(n), pipsi(n);
    parallel_for(n, [&](std::size_t i) {
      RngStream rng(71, i);
      const LimitField f = sampler.draw_field(rng);
      psi[i] = f.psi;
      pipsi[i] = f.pi * f.psi;
    });
    const SampleStats s = summarize(psi);
    const double se = s.variance * std::sqrt(2.0 / n);
    CHECK(std::abs(s.variance - sampler.moment_b()) < 3.0 * se);
    if (gamma == 1.0) {
      const SampleStats c = summarize(pipsi);
      CHECK(std::abs(c.mean) < 3.0 * std::sqrt(c.variance / n));
    }
  }
}

TEST_CASE("pi with an integrable singularity: midpoint cells behave as designed") {
  // gamma in (1/2, 1): the pi integrand |z|^{gamma-1} blows up at 0 and each
  // cell is evaluated at its midpoint. The sampler must hit the discretized
  // variance exactly; the midpoint rule itself is allowed an O(sqrt(dz)) gap
  // to the continuum moment (measured ~5% at the default grid).
  const double g = 0.75;
  const ParamLimitSampler sampler(g);
  const double dz = sampler.grid().dz;
  double discrete = 0.0;
  for (std::size_t i = 0; i < sampler.n_cells(); ++i) {
    const double z = -sampler.grid().half_width + dz * (static_cast<double>(i) + 0.5);
    const double w = pow_abs(z, g - 1.0) * std::sqrt(standard_density(g, z));
    discrete += w * w * dz;
  }
  const int n = 60000;
  std::vector<double> pi(n);
  parallel_for(n, [&](std::size_t i) {
    RngStream rng(74, i);
    pi[i] = sampler.draw_field(rng).pi;
  });
  const SampleStats s = summarize(pi);
  CHECK(std::abs(s.variance - discrete) < 3.0 * s.variance * std::sqrt(2.0 / n));
  const double a = stationary_abs_moment(g, 2.0 * g - 2.0);
  CHECK(std::abs(discrete - a) / a < 0.10);
}

TEST_CASE("variance of the edf field matches the quadrature isometry") {
  const ParamLimitSampler sampler(1.0);
  const int n = 60000;
  const std::size_t idx[3] = {80, 200, 320};
  std::vector<std::vector<double>> phi(3, std::vector<double>(n));
  std::vector<double> ys(3);
  parallel_for(n, [&](std::size_t i) {
    RngStream rng(72, i);
    const LimitField f = sampler.draw_field(rng);
    for (int k = 0; k < 3; ++k) {
      phi[k][i] = f.phi[idx[k]];
      if (i == 0) ys[k] = f.y_grid[idx[k]];
    }
  });
  for (int k = 0; k < 3; ++k) {
    const double y = ys[k];
    const double want = 4.0 * integrate(
                                [&](double z) {
                                  const double num = standard_cdf(1, z) * standard_cdf(1, y) -
                                                     standard_cdf(1, std::min(z, y));
                                  return num * num / standard_density(1, z);
                                },
                                -7.0, 7.0, 1e-10, 4000);
    const SampleStats s = summarize(phi[k]);
    CHECK(std::abs(s.variance - want) < 3.0 * s.variance * std::sqrt(2.0 / n));
  }
}

TEST_CASE("variance of the simple field matches the quadrature isometry") {
  const SimpleModel ou([](double x) { return -x; }, [](double) { return 1.0; }, Interval{-8, 8},
                       "ou-iso");
  const SimpleLimitSampler sampler(ou);
  // x closest to 0 on the quantile grid
  std::size_t j0 = 0;
  for (std::size_t j = 0; j < sampler.x_grid().size(); ++j) {
    if (std::abs(sampler.x_grid()[j]) < std::abs(sampler.x_grid()[j0])) j0 = j;
  }
  const double x = sampler.x_grid()[j0];
  const int n = 100000;
  std::vector<double> vals(n);
  const double sd = std::sqrt(sampler.grid().dz);
  parallel_for(n, [&](std::size_t i) {
    RngStream rng(73, i);
    std::vector<double> dw(sampler.n_cells());
    for (auto& v : dw) v = sd * rng.normal();
    vals[i] = sampler.field_from_increments(dw)[j0];
  });
  const double want =
      4.0 * ou.density(x) * ou.density(x) *
      integrate(
          [&](double z) {
            const double num = ou.cdf(z) - (z > x ? 1.0 : 0.0);
            return num * num / ou.density(z);
          },
          -7.5, 7.5, 1e-10, 4000);
  const SampleStats s = summarize(vals);
  CHECK(std::abs(s.variance - want) < 3.0 * s.variance * std::sqrt(2.0 / n));
}

TEST_CASE("sampler grids converge: refining changes the q90 of Delta by < 2%") {
  const LimitGrid coarse = default_param_limit_grid(1.0);
  LimitGrid fine = coarse;
  fine.half_width *= 2.0;
  fine.dz *= 0.5;
  auto a = draw_limit_samples(*make_limit_law("Delta:gamma=1", coarse), 10000, 9);
  auto b = draw_limit_samples(*make_limit_law("Delta:gamma=1", fine), 10000, 9);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double qa = quantile_sorted(a, 0.9);
  const double qb = quantile_sorted(b, 0.9);
  CHECK(std::abs(qa - qb) / qa < 0.02);
}

TEST_CASE("wiener functional moments against the analytic oracle") {
  const auto samples = draw_limit_samples(*make_limit_law("int_w2", 1000), 100000, 7);
  const SampleStats s = summarize(samples);
  // E = 1/2 (Fubini, E w(t)^2 = t); Var = 1/3 (Cov(w(s)^2, w(t)^2) = 2 min^2)
  CHECK(s.mean > 0.49);
  CHECK(s.mean < 0.51);
  CHECK(s.variance > 0.31);
  CHECK(s.variance < 0.35);
}

TEST_CASE("sup|w| law matches the reflection series") {
  auto samples = draw_limit_samples(*make_limit_law("sup_abs_w", 4000), 100000, 8);
  std::sort(samples.begin(), samples.end());
  for (double x : {1.2, 1.6, 2.0, 2.4}) {
    const double emp =
        static_cast<double>(std::lower_bound(samples.begin(), samples.end(), x) - samples.begin()) /
        static_cast<double>(samples.size());
    CHECK(std::abs(emp - oracles::sup_abs_w_cdf(x)) < 0.01);
  }
}

TEST_CASE("law ids resolve and reject consistently") {
  CHECK(make_limit_law("Delta:gamma=1")->law_id() == "Delta:gamma=1");
  CHECK(make_limit_law("delta_sup:gamma=0.3")->law_id() == "delta_sup:gamma=0.3");
  CHECK(make_limit_law("int_w2")->grid_meta().n_steps == 1000);
  CHECK_THROWS_AS(make_limit_law("nonsense"), validation_error);
  CHECK_THROWS_AS(make_limit_law("delta_S0:abc123"), validation_error);

  const SimpleModel ou([](double x) { return -x; }, [](double) { return 1.0; }, Interval{-8, 8},
                       "ou-id");
  const auto law = make_simple_limit_law(ou, StatNorm::cvm);
  CHECK(law->law_id() == simple_law_id(ou, StatNorm::cvm));
  CHECK(law->law_id().rfind("delta_S0:", 0) == 0);
}

TEST_CASE("draws are deterministic per stream and order-independent") {
  const auto law = make_limit_law("Delta:gamma=1");
  const auto a = draw_limit_samples(*law, 50, 1234);
  const auto b = draw_limit_samples(*law, 50, 1234);
  CHECK(a == b);
  // the sampler for stream i does not depend on how many streams run
  const auto c = draw_limit_samples(*law, 10, 1234);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == a[i]);
}

TEST_CASE("limit sampler vs itself across seeds is indistinguishable") {
  const auto law = make_limit_law("int_w2", 400);
  const auto a = draw_limit_samples(*law, 4000, 1);
  const auto b = draw_limit_samples(*law, 4000, 2);
  CHECK(two_sample_ks(a, b) < two_sample_ks_critical(0.01, a.size(), b.size()));
}

}  // TEST_SUITE
