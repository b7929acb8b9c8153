// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ergofit/errors.hpp"
#include "ergofit/numerics.hpp"
#include "ergofit/rng.hpp"

using namespace ergofit;

TEST_SUITE("numerics") {

TEST_CASE("gauss-kronrod handles smooth integrands to tight tolerance") {
  const double v = integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-12);
  CHECK(v == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));

  const double p = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12);
  CHECK(p == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("adaptive refinement resolves an integrable endpoint singularity") {
  // int_0^1 x^{-1/2} dx = 2
  const double v = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9, 20000);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("breakpoint integration splits at a kink") {
  const std::vector<double> pts = {-1.0, 0.0, 1.0};
  const double v = integrate_breakpoints([](double x) { return std::abs(x); }, pts, 1e-12);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regularized incomplete gamma against known values") {
  // P(1/2, x) = erf(sqrt(x))
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    CHECK(regularized_gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-13));
  }
  // P(1, x) = 1 - exp(-x)
  for (double x : {0.2, 1.0, 3.0, 10.0}) {
    CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
  }
  CHECK(regularized_gamma_p(0.25, 0.0) == 0.0);
  CHECK_THROWS_AS(regularized_gamma_p(-1.0, 1.0), validation_error);
}

TEST_CASE("brent root finder") {
  const double r = find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), numerical_error);
}

TEST_CASE("golden section maximization") {
  const double x = golden_section_max([](double t) { return -(t - 0.3) * (t - 0.3); }, -1.0, 1.0, 1e-10);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-7));
}

TEST_CASE("summarize computes moments") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  const SampleStats s = summarize(xs);
  CHECK(s.n == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(1.25));
  CHECK(s.min == 1.0);
  CHECK(s.max == 4.0);
}

TEST_CASE("two-sample ks distance on hand-built samples") {
  const std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> b = {1.5, 2.5, 3.5, 4.5};
  // After each a-point, F_a leads F_b by 1/4.
  CHECK(two_sample_ks(a, b) == doctest::Approx(0.25));
  const std::vector<double> c = {10.0, 11.0};
  CHECK(two_sample_ks(a, c) == doctest::Approx(1.0));
  CHECK(two_sample_ks(a, a) == doctest::Approx(0.0));
}

TEST_CASE("two-sample ks critical value formula") {
  // c(0.01) = sqrt(-ln(0.005)/2) ~= 1.6276
  const double crit = two_sample_ks_critical(0.01, 300, 300);
  CHECK(crit == doctest::Approx(1.62762 * std::sqrt(600.0 / 90000.0)).epsilon(1e-4));
}

TEST_CASE("quantile of a sorted sample picks the ceil order statistic") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
  CHECK(quantile_sorted(xs, 0.95) == 10.0);
  CHECK(quantile_sorted(xs, 0.90) == 9.0);
  CHECK(quantile_sorted(xs, 0.05) == 1.0);
  CHECK(quantile_sorted(xs, 0.11) == 2.0);
}

}  // TEST_SUITE

TEST_SUITE("rng") {

TEST_CASE("identical key gives identical sequences, regardless of interleaving") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, 8);
  bool all_equal = true;
  RngStream a2(42, 7);
  for (int i = 0; i < 16; ++i) all_equal = all_equal && (a2.next_u64() == c.next_u64());
  CHECK_FALSE(all_equal);
}

TEST_CASE("uniform01 stays inside the open interval and looks uniform") {
  RngStream rng(1, 0);
  double mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  mean /= n;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal moments") {
  RngStream rng(3, 0);
  const int n = 200000;
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.normal();
  const SampleStats s = summarize(xs);
  // 3 MC standard errors
  CHECK(std::abs(s.mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(s.variance == doctest::Approx(1.0).epsilon(0.02));
  double kurt = 0.0;
  for (double x : xs) kurt += std::pow(x - s.mean, 4);
  kurt /= n * s.variance * s.variance;
  CHECK(kurt == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("substreams are reproducible and distinct") {
  RngStream base(9, 4);
  RngStream s1 = base.substream(1);
  RngStream s1_again = RngStream(9, 4).substream(1);
  RngStream s2 = base.substream(2);
  CHECK(s1.next_u64() == s1_again.next_u64());
  CHECK(s1.next_u64() != s2.next_u64());
}

}  // TEST_SUITE
