#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mgt/gamma.hpp"
#include "mgt/grid.hpp"

using namespace mgt;
using std::numbers::pi;

namespace {

Field cos_mode(const Grid& g, int k, double a = 1.0) {
  return sample(g, [&](double x) { return a * std::cos(k * pi * x / g.length()); });
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected mgt::Error");
  return Errc::IoError;
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("build_grid validates its inputs") {
    const Grid g = build_grid(2.0, 16);
    CHECK(g.nodes() == 17);
    CHECK(g.spacing() == doctest::Approx(0.125));
    CHECK(g.x(16) == 2.0);
    CHECK(code_of([] { build_grid(0.0, 16); }) == Errc::NonPositiveLength);
    CHECK(code_of([] { build_grid(-1.0, 16); }) == Errc::NonPositiveLength);
    CHECK(code_of([] { build_grid(1.0, 7); }) == Errc::TooFewCells);
    CHECK(code_of([] { build_grid(std::numeric_limits<double>::quiet_NaN(), 16); }) == Errc::NonPositiveLength);
  }

  TEST_CASE("field construction rejects a length mismatch") {
    const Grid g = build_grid(1.0, 8);
    CHECK(code_of([&] { Field(g, std::vector<double>(5, 0.0)); }) == Errc::GridMismatch);
  }

  TEST_CASE("d2_neumann reproduces the discrete eigenrelation on every cosine mode") {
    for (int n : {8, 33, 128}) {
      for (double L : {1.0, 2.5}) {
        const Grid g = build_grid(L, n);
        for (int k = 0; k <= n; ++k) {
          const Field f = cos_mode(g, k);
          const Field d = d2_neumann(f);
          const double mu = discrete_mode_eigenvalue(g, k);
          for (std::size_t i = 0; i < g.nodes(); ++i) {
            CHECK(std::abs(d[i] + mu * f[i]) <= 1e-13 * 4.0 / (g.spacing() * g.spacing()));
          }
        }
      }
    }
  }

  TEST_CASE("discrete eigenvalue") {
    const Grid g = build_grid(1.0, 128);
    const double h = g.spacing();
    CHECK(discrete_mode_eigenvalue(g, 0) == 0.0);
    CHECK(discrete_mode_eigenvalue(g, 1) == doctest::Approx(4.0 / (h * h) * std::pow(std::sin(pi * h / 2), 2)));
    CHECK(discrete_mode_eigenvalue(g, 1) < pi * pi);
    // mu_h h^2 depends only on k h / L.
    const Grid g2 = build_grid(1.0, 256);
    CHECK(discrete_mode_eigenvalue(g, 3) * h * h ==
          doctest::Approx(discrete_mode_eigenvalue(g2, 6) * g2.spacing() * g2.spacing()).epsilon(1e-14));
  }

  TEST_CASE("d1_central vanishes at the boundary and is exact on cosine modes") {
    const Grid g = build_grid(1.0, 32);
    const Field f = cos_mode(g, 3);
    const Field d = d1_central(f);
    CHECK(d[0] == 0.0);
    CHECK(d[g.nodes() - 1] == 0.0);
    const double h = g.spacing();
    for (std::size_t i = 1; i + 1 < g.nodes(); ++i) {
      CHECK(d[i] == doctest::Approx(-std::sin(3 * pi * h) / h * std::sin(3 * pi * g.x(i))).epsilon(1e-12));
    }
  }

  TEST_CASE("div_flux with unit coefficient is d2_neumann") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const Grid g = build_grid(1.0, 40);
    const Field f = sample(g, [&](double) { return U(rng); });
    const Field one(g, 1.0);
    const Field a = div_flux_neumann(one, f);
    const Field b = d2_neumann(f);
    for (std::size_t i = 0; i < g.nodes(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
  }

  TEST_CASE("div_flux is conservative under the trapezoid rule") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0), C(0.1, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
      const Grid g = build_grid(1.0 + trial * 0.1, 16 + 7 * trial);
      const Field f = sample(g, [&](double) { return U(rng); });
      const Field c = sample(g, [&](double) { return C(rng); });
      const Field d = div_flux_neumann(c, f);
      double scale = 0.0;
      for (std::size_t i = 0; i < g.nodes(); ++i) scale = std::max(scale, std::abs(d[i]));
      CHECK(std::abs(quad_trapz(d)) <= 1e-13 * std::max(1.0, scale));
    }
  }

  TEST_CASE("second-order convergence on smooth Neumann-compatible data") {
    // f = exp(cos(pi x)), c = 1.5 + 0.5 cos(pi x): both have zero slope at the ends.
    auto f_of = [](double x) { return std::exp(std::cos(pi * x)); };
    auto fx = [&](double x) { return -pi * std::sin(pi * x) * f_of(x); };
    auto fxx = [&](double x) {
      const double s = std::sin(pi * x), c = std::cos(pi * x);
      return pi * pi * (s * s - c) * f_of(x);
    };
    auto c_of = [](double x) { return 1.5 + 0.5 * std::cos(pi * x); };
    auto flux = [&](double x) { return -0.5 * pi * std::sin(pi * x) * fx(x) + c_of(x) * fxx(x); };

    std::vector<std::array<double, 3>> errs;
    for (int n : {32, 64, 128, 256}) {
      const Grid g = build_grid(1.0, n);
      const Field f = sample(g, f_of);
      const Field d1 = d1_central(f), d2 = d2_neumann(f), df = div_flux_neumann(sample(g, c_of), f);
      std::array<double, 3> e{};
      for (std::size_t i = 0; i < g.nodes(); ++i) {
        const double x = g.x(i);
        e[0] = std::max(e[0], std::abs(d1[i] - fx(x)));
        e[1] = std::max(e[1], std::abs(d2[i] - fxx(x)));
        e[2] = std::max(e[2], std::abs(df[i] - flux(x)));
      }
      errs.push_back(e);
    }
    for (std::size_t j = 1; j < errs.size(); ++j) {
      for (int op = 0; op < 3; ++op) {
        const double ratio = errs[j - 1][op] / errs[j][op];
        INFO("operator " << op << " ratio " << ratio);
        CHECK(ratio >= 3.4);
        CHECK(ratio <= 4.6);
      }
    }
  }

  TEST_CASE("div_flux rejects bad coefficients") {
    const Grid g = build_grid(1.0, 8);
    const Grid g2 = build_grid(1.0, 9);
    const Field f(g, 1.0);
    CHECK(code_of([&] { div_flux_neumann(Field(g, 0.0), f); }) == Errc::NonPositiveCoefficient);
    CHECK(code_of([&] { div_flux_neumann(Field(g2, 1.0), f); }) == Errc::GridMismatch);
  }

  TEST_CASE("checked operators reject non-finite input") {
    const Grid g = build_grid(1.0, 8);
    std::vector<double> v(g.nodes(), 0.0);
    v[3] = std::numeric_limits<double>::quiet_NaN();
    const Field bad(g, v);
    CHECK(code_of([&] { d1_central(bad); }) == Errc::NonFiniteInput);
    CHECK(code_of([&] { d2_neumann(bad); }) == Errc::NonFiniteInput);
    CHECK(code_of([&] { quad_trapz(bad); }) == Errc::NonFiniteInput);
    CHECK(code_of([&] { norm_linf(bad); }) == Errc::NonFiniteInput);
    CHECK(code_of([&] { div_flux_neumann(Field(g, 1.0), bad); }) == Errc::NonFiniteInput);
  }

  TEST_CASE("trapezoid rule and sup norm") {
    const Grid g = build_grid(2.0, 10);
    CHECK(quad_trapz(sample(g, [](double x) { return 3.0 * x + 1.0; })) == doctest::Approx(8.0).epsilon(1e-14));
    // Cosine modes integrate to zero exactly.
    CHECK(std::abs(quad_trapz(cos_mode(g, 4))) < 1e-14);
    CHECK(norm_linf(sample(g, [](double x) { return x - 1.5; })) == doctest::Approx(1.5));
  }
}

TEST_SUITE("gamma") {
  TEST_CASE("closed-form derivatives match finite differences") {
    const std::vector<GammaSpec> specs = {
        GammaSpec::constant(2.0),
        GammaSpec::exp_decay(1.0, 0.5, 1.0),
        GammaSpec::exp_decay(0.3, 2.0, 3.5),
        GammaSpec::rational(1.0, 0.7),
        GammaSpec::rational(2.0, -0.5),
        GammaSpec::gaussian_bump(1.0, 0.4, 0.8, 0.3),
        GammaSpec::gaussian_bump(1.0, -0.6, 1.2, 0.5),
    };
    for (const auto& s : specs) {
      for (double xi : {0.05, 0.3, 0.77, 1.0, 1.6, 2.9}) {
        const double h = 1e-4;
        const GammaValue p = gamma_eval(s, xi + h), m = gamma_eval(s, xi - h), c = gamma_eval(s, xi);
        // Fourth-order stencils would be overkill; Richardson-combine two central differences instead.
        const GammaValue p2 = gamma_eval(s, xi + 2 * h), m2 = gamma_eval(s, xi - 2 * h);
        const double d1 = (8.0 * (p.value - m.value) - (p2.value - m2.value)) / (12.0 * h);
        const double d2 = (8.0 * (p.first - m.first) - (p2.first - m2.first)) / (12.0 * h);
        const double s1 = std::max(1.0, std::abs(c.first));
        const double s2 = std::max(1.0, std::abs(c.second));
        CHECK(std::abs(d1 - c.first) <= 1e-8 * s1);
        CHECK(std::abs(d2 - c.second) <= 1e-8 * s2);
      }
    }
  }

  TEST_CASE("negative argument is rejected") {
    CHECK_THROWS_AS(gamma_eval(GammaSpec::rational(1.0, 1.0), -0.1), Error);
  }

  TEST_CASE("constant and flat exp_decay agree bitwise") {
    const std::vector<double> xi = {0.0, 0.5, 1.0, 3.0};
    std::vector<double> a(4), b(4);
    gamma_values(GammaSpec::constant(1.3), xi, a);
    gamma_values(GammaSpec::exp_decay(1.3, 0.0, 2.0), xi, b);
    CHECK(a == b);
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(GammaSpec::constant(0.0).validate(1.0), Error);
    CHECK_THROWS_AS(GammaSpec::exp_decay(1.0, -1.0, 1.0).validate(1.0), Error);
    CHECK_THROWS_AS(GammaSpec::rational(1.0, -1.0).validate(1.0), Error);
    CHECK_THROWS_AS(GammaSpec::gaussian_bump(1.0, -1.0, 0.5, 0.2).validate(1.0), Error);
    CHECK_THROWS_AS(GammaSpec::gaussian_bump(1.0, 0.5, 0.5, 0.0).validate(1.0), Error);
    CHECK_NOTHROW(GammaSpec::gaussian_bump(1.0, -0.9, 0.5, 0.2).validate(1.0));
  }

  TEST_CASE("bounds use the analytic extrema") {
    const GammaBounds e = gamma_bounds(GammaSpec::exp_decay(1.0, 0.5, 1.0), 0.0, 2.0);
    CHECK(e.min_value == doctest::Approx(1.0 + 0.5 * std::exp(-2.0)).epsilon(1e-15));
    CHECK(e.max_value == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(e.max_abs_first == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.max_abs_second == doctest::Approx(0.5).epsilon(1e-15));
    // Bump peak between samples is still found exactly.
    const GammaBounds b = gamma_bounds(GammaSpec::gaussian_bump(1.0, 0.5, 0.123456789, 0.01), 0.0, 2.0, 10);
    CHECK(b.max_value == doctest::Approx(1.5).epsilon(1e-15));
    const GammaBounds r = gamma_bounds(GammaSpec::rational(1.0, 1.0), 0.0, 2.0);
    CHECK(r.max_abs_first == doctest::Approx(3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-14));
  }
}
