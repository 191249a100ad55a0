#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dpplab/core/quadrature.hpp"
#include "dpplab/cumulants.hpp"
#include "dpplab/kernels.hpp"
#include "dpplab/limits.hpp"
#include "dpplab/orthopoly.hpp"
#include "support/oracles.hpp"

using namespace dpplab;
using namespace dpplab::limits;
using std::numbers::pi;

TEST_CASE("planar gaussian energy") {
  const Gaussian2D f(cplx{0.0, 0.0}, 0.7);
  // |df|^2 = |z|^2/sigma^4 e^{-2|z|^2/sigma^2}: the energy is 1/4 at any width
  const double v = h1_variance(f);
  CHECK(v == doctest::Approx(0.25).epsilon(1e-8));

  SUBCASE("dilation invariance") {
    const auto base = std::make_shared<Gaussian2D>(cplx{0.0, 0.0}, 0.7);
    const Rescaled2D g(base, 2.0, cplx{0.0, 0.0});
    CHECK(h1_variance(g) == doctest::Approx(v).epsilon(1e-7));
  }
  SUBCASE("translation invariance") {
    const Gaussian2D g(cplx{0.4, -0.3}, 0.7);
    CHECK(h1_variance(g) == doctest::Approx(v).epsilon(1e-7));
  }
  SUBCASE("gradient form agrees with the wirtinger form") {
    // (1/4) \int |grad f|^2 dA by central differences
    const Grid2D g = polar_grid({0.0, 0.0}, f.support_radius(), 160, 6, 96);
    const double h = 1e-5;
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const cplx z = to_cplx(g.pts[i]);
      const double fx = (f(z + h) - f(z - h)) / (2 * h);
      const double fy = (f(z + cplx{0, h}) - f(z - cplx{0, h})) / (2 * h);
      s += g.w[i] * 0.25 * (fx * fx + fy * fy);
    }
    CHECK(s == doctest::Approx(v).epsilon(1e-6));
  }
}

TEST_CASE("chebyshev variance with the weight-moment oracle") {
  // c_1(x) = (2/pi) \int x^2/sqrt(1-x^2) = 1; variance 1/4
  const double c1 = 2.0 / pi * oracles::chebyshev_weight_moment(2);
  CHECK(c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chebyshev_variance(Poly1D(Poly::monomial(1))) ==
        doctest::Approx(0.25 * c1 * c1).epsilon(1e-12));
  // c_2(x^2) = (2/pi)(2 m4 - m2) = 1/2 via \int x^4/sqrt = 3pi/8; variance 1/8
  const double m4 = oracles::chebyshev_weight_moment(4);
  CHECK(m4 == doctest::Approx(3.0 * pi / 8).epsilon(1e-12));
  const double c2 = 2.0 / pi * (2.0 * m4 - oracles::chebyshev_weight_moment(2));
  CHECK(chebyshev_variance(Poly1D(Poly::monomial(2))) ==
        doctest::Approx(0.25 * 2.0 * c2 * c2).epsilon(1e-12));
  // constants carry no fluctuation
  CHECK(chebyshev_variance(Poly1D(Poly({3.0}))) == doctest::Approx(0.0));
  // a bump supported inside [-1,1] has a finite, positive variance
  CHECK(chebyshev_variance(Bump1D(0.1, 0.4)) > 0.0);
}

TEST_CASE("half-line spectral energy") {
  // fhat(u) = sigma e^{-pi sigma^2 u^2}; \int_0^inf u |fhat|^2 = 1/(4 pi)
  CHECK(h_half_variance(Gaussian1D(0.0, 1.0)) ==
        doctest::Approx(1.0 / (4 * pi)).epsilon(1e-10));
  SUBCASE("scale and translation invariance") {
    CHECK(h_half_variance(Gaussian1D(0.0, 2.5)) ==
          doctest::Approx(1.0 / (4 * pi)).epsilon(1e-10));
    CHECK(h_half_variance(Gaussian1D(1.3, 1.0)) ==
          doctest::Approx(1.0 / (4 * pi)).epsilon(1e-10));
    const auto b = Bump1D(0.0, 0.8);
    const auto bt = Bump1D(0.7, 0.8);
    CHECK(h_half_variance(b) == doctest::Approx(h_half_variance(bt)).epsilon(1e-8));
  }
}

TEST_CASE("poisson cumulants") {
  const auto eq2 = kernels::equilibrium_2d(kernels::Potential2D::quadratic());
  SUBCASE("mean-zero process: first cumulant vanishes") {
    CHECK(poisson_cumulant(Gaussian1D(0, 1), Intensity1D::lebesgue(), 1) == 0.0);
    CHECK(poisson_cumulant(Gaussian2D(0, 1), Intensity2D::lebesgue(), 1) == 0.0);
  }
  SUBCASE("near-indicator of the droplet integrates to ~1") {
    const Bump2D f(cplx{0, 0}, 14.0);  // ~1 on the droplet of radius .707
    CHECK(poisson_cumulant(f, Intensity2D::equilibrium(eq2), 2) ==
          doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("odd powers flip sign") {
    const Bump1D f(0.2, 0.5);
    const auto eta = Intensity1D::lebesgue(2.0);
    CHECK(poisson_cumulant(f, eta, 3) > 0.0);
    // -f at odd order flips: emulate with the identity C^n(-f) = (-1)^n C^n(f)
    // for monomial powers of f under the integral
    const double c3 = poisson_cumulant(f, eta, 3);
    const double c4 = poisson_cumulant(f, eta, 4);
    CHECK(c3 != doctest::Approx(0.0));
    CHECK(c4 > 0.0);
  }
}

TEST_CASE("crossover cumulants compose gaussian and poisson parts") {
  const auto eq1 = orthopoly::equilibrium_1d(orthopoly::Potential1D::quadratic());
  const Poly1D Q(Poly::monomial(2));
  SUBCASE("tau = 0 reduces to the gaussian limit") {
    CHECK(crossover_cumulant(Q, 2, 0.0, Setting::macro1d, &eq1) ==
          doctest::Approx(0.125).epsilon(1e-10));
    CHECK(crossover_cumulant(Q, 3, 0.0, Setting::macro1d, &eq1) == 0.0);
  }
  SUBCASE("macroscopic targets use semicircle moments") {
    const double tau = 2.0;
    CHECK(crossover_cumulant(Q, 3, tau, Setting::macro1d, &eq1) ==
          doctest::Approx(-tau * oracles::semicircle_moment(6)).epsilon(1e-7));
    CHECK(crossover_cumulant(Q, 4, tau, Setting::macro1d, &eq1) ==
          doctest::Approx(tau * oracles::semicircle_moment(8)).epsilon(1e-7));
  }
  SUBCASE("mesoscopic 1-d third cumulant is the negative lebesgue integral") {
    const Gaussian1D f(0.0, 1.0);
    const double tau = 1.5;
    const Grid1D g = gl_panels(-4.0, 4.0, 200, 8);
    const double want = -tau * g.integrate([&](double x) {
      return std::pow(f(x), 3);
    });
    CHECK(crossover_cumulant(f, 3, tau, Setting::meso1d) ==
          doctest::Approx(want).epsilon(1e-8));
  }
  SUBCASE("large tau recovers the white-noise scaling") {
    const Gaussian1D f(0.0, 1.0);
    const double tau = 1e6;
    const Grid1D g = gl_panels(-4.0, 4.0, 200, 8);
    const double l2 = g.integrate([&](double x) { return f(x) * f(x); });
    CHECK(crossover_cumulant(f, 2, tau, Setting::meso1d) / tau ==
          doctest::Approx(l2).epsilon(1e-5));
  }
}

TEST_CASE("planar loop integral") {
  auto mono = [](int n, std::vector<int> we, std::vector<int> wb) {
    LoopPoly H;
    H.n = n;
    H.add(1.0, std::move(we), std::move(wb));
    return H;
  };
  // closed forms, frozen from the direct quadrature oracle below
  const LoopPoly h_wbar1_w2 = mono(2, {0, 1}, {1, 0});  // conj(w1) w2 -> 1
  const LoopPoly h_w1_wbar2 = mono(2, {1, 0}, {0, 1});  // w1 conj(w2) -> 0
  const LoopPoly h_abs_w1 = mono(2, {1, 0}, {1, 0});    // |w1|^2 -> 1
  const LoopPoly h_w1_sq = mono(2, {2, 0}, {0, 0});     // w1^2 -> 0
  CHECK(ginibre_loop_closed_form(h_wbar1_w2) == doctest::Approx(1.0));
  CHECK(ginibre_loop_closed_form(h_w1_wbar2) == doctest::Approx(0.0));
  CHECK(ginibre_loop_closed_form(h_abs_w1) == doctest::Approx(1.0));
  CHECK(ginibre_loop_closed_form(h_w1_sq) == doctest::Approx(0.0));
  CHECK(ginibre_loop_closed_form(mono(2, {0, 0}, {0, 0})) == doctest::Approx(0.0));

  const std::vector<LoopPoly> all = {h_wbar1_w2, h_w1_wbar2, h_abs_w1, h_w1_sq};
  for (double rho : {1.0, 10.0}) {
    const auto got = ginibre_loop_quadrature(all, rho);
    for (std::size_t i = 0; i < all.size(); ++i)
      CHECK(got[i] == doctest::Approx(ginibre_loop_closed_form(all[i]))
                          .epsilon(1e-4)
                          .scale(1.0));
  }
}

TEST_CASE("sine-kernel main term") {
  const Gaussian1D f(0.0, 1.0);

  SUBCASE("order 2 equals the full-line spectral energy, positive sign") {
    // \int_R |u| |fhat|^2 du = 2 * (half-line energy) = 1/(2 pi)
    const auto r = sine_main_term(f, 2, combi::UpsilonMap::base_map());
    CHECK(r.value == doctest::Approx(1.0 / (2 * pi)).epsilon(1e-6));
    CHECK(r.value > 0.0);  // sign locked against the kernel-quadrature route
  }

  SUBCASE("order 2 cross-validates against the band-kernel cumulant") {
    const auto K = kernels::sine_kernel(12.0);
    const auto c2 = cumulants::quadrature_cumulant(*K, f, 2, 1.0);
    const auto r = sine_main_term(f, 2, combi::UpsilonMap::base_map());
    CHECK(c2.value == doctest::Approx(r.value).epsilon(1e-4));
  }

  SUBCASE("order 3 matches the density ladder of kernel cumulants") {
    const auto r = sine_main_term(f, 3, combi::UpsilonMap::base_map());
    double last = 0.0;
    for (double rho : {4.0, 8.0, 16.0}) {
      const auto K = kernels::sine_kernel(rho);
      last = cumulants::quadrature_cumulant(*K, f, 3, 1.0).value;
    }
    CHECK(last == doctest::Approx(r.value).epsilon(0.02));
  }

  SUBCASE("indexed maps give finite values as well") {
    const auto r = sine_main_term(f, 3, combi::UpsilonMap::indexed(1));
    CHECK(std::isfinite(r.value));
  }
}

TEST_CASE("integrated density of states change of variables") {
  const auto eq = orthopoly::equilibrium_1d(orthopoly::Potential1D::quadratic());

  SUBCASE("fixed point and unit derivative at the base point") {
    CHECK(ids_zeta(eq, 0.3, 0.5, 1e4, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    const double h = 1e-4;
    const double d =
        (ids_zeta(eq, 0.3, 0.5, 1e4, h) - ids_zeta(eq, 0.3, 0.5, 1e4, -h)) /
        (2 * h);
    CHECK(d == doctest::Approx(1.0).epsilon(1e-3));
  }

  SUBCASE("near-identity on compacts at the stated rate") {
    CHECK(std::abs(ids_zeta(eq, 0.0, 0.5, 1e4, 0.5) - 0.5) < 0.02);
    double prev = 1e9;
    for (double N : {1e2, 1e4, 1e6}) {
      const double dev = std::abs(ids_zeta(eq, 0.2, 0.5, N, 0.4) - 0.4);
      CHECK(dev < prev);
      prev = dev;
    }
  }

  SUBCASE("out-of-bulk arguments are rejected") {
    CHECK_THROWS_AS(ids_zeta(eq, 0.99, 0.5, 100.0, 3.0), range_error);
    CHECK_THROWS_AS(ids_zeta(eq, 1.5, 0.5, 100.0, 0.0), range_error);
  }
}
