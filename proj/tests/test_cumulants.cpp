#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dpplab/core/quadrature.hpp"
#include "dpplab/cumulants.hpp"
#include "dpplab/kernels.hpp"
#include "dpplab/limits.hpp"
#include "support/oracles.hpp"

using namespace dpplab;
using namespace dpplab::cumulants;
using orthopoly::Potential1D;

namespace {

orthopoly::JacobiMatrix herm(int N, int slack) {
  return orthopoly::hermite_recurrence(N, N + slack);
}

}  // namespace

TEST_CASE("thinning schedules") {
  const auto reg = ThinningRegime::critical(2.0);
  CHECK(reg.q_at(100) == doctest::Approx(0.02));
  CHECK(macro_T(100, reg.q_at(100)) == doctest::Approx(2.0));
  const auto sub = ThinningRegime::sub(1.0, 2.0);
  CHECK(macro_T(200, sub.q_at(200)) == doctest::Approx(1.0 / 200));
  const auto sup = ThinningRegime::super(1.0, 0.5);
  CHECK(macro_T(100, sup.q_at(100)) == doctest::Approx(10.0));
  CHECK_THROWS_AS(ThinningRegime::sub(1.0, 0.9), range_error);
  CHECK_THROWS_AS(ThinningRegime::super(1.0, 1.5), range_error);
  CHECK(meso_T_1d(16, 0.25, 0.5, 0.6366) ==
        doctest::Approx(0.25 * 4.0 * 0.6366));
  CHECK(meso_T_2d(100, 0.1, 2.0, 2.0) == doctest::Approx(100 * 0.1 * 2.0 / 4.0));
}

TEST_CASE("exact engine: symmetry, mean linearity, margin audit") {
  const auto V = Potential1D::quadratic();

  SUBCASE("odd statistic has zero odd cumulants at any retention") {
    const Poly x = Poly::monomial(1);
    const auto J = herm(40, 60);
    for (double p : {1.0, 0.6})
      CHECK(std::abs(exact_cumulant_1d(J, x, 40, 1, p)) < 1e-14);
    CHECK(std::abs(exact_cumulant_1d(J, x, 40, 3, 1.0)) < 1e-13);
  }

  SUBCASE("first cumulant is exactly linear in the retention") {
    const Poly x2 = Poly::monomial(2);
    const auto J = herm(30, 60);
    const double full = exact_cumulant_1d(J, x2, 30, 1, 1.0);
    CHECK(exact_cumulant_1d(J, x2, 30, 1, 0.5) ==
          doctest::Approx(0.5 * full).epsilon(1e-15));
    // and equals the projected trace of Q(J)
    double tr = 0.0;
    for (int m = 0; m < 30; ++m) {
      // diagonal of J^2: a_{m-1}^2 + b_m^2 + a_m^2
      const double am = J.a[m], amm = (m ? J.a[m - 1] : 0.0);
      tr += am * am + amm * amm;
    }
    CHECK(full == doctest::Approx(tr).epsilon(1e-12));
  }

  SUBCASE("insufficient truncation is rejected") {
    const Poly x2 = Poly::monomial(2);
    CHECK_THROWS_AS(exact_cumulant_1d(herm(30, 10), x2, 30, 4, 1.0), range_error);
  }
}

TEST_CASE("engine agreement: trace-log form vs path enumeration") {
  const auto V = Potential1D::quadratic();
  for (int N : {4, 7, 10, 12}) {
    for (int deg : {1, 2}) {
      const Poly Q = (deg == 1) ? Poly({0.3, 1.0}) : Poly({0.1, -0.4, 0.8});
      const auto J = herm(N, N + 4 * deg + 20);
      for (int n = 1; n <= 4; ++n) {
        const double a = exact_cumulant_1d(J, Q, N, n, 1.0);
        const double b = path_cumulant_oracle(J, Q, N, n);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("engine agreement: exact vs quadrature on the projection kernel") {
  const auto V = Potential1D::quadratic();
  for (int N : {20, 40}) {
    const auto J = herm(N, N + 40);
    const auto K = orthopoly::cd_kernel(J, V);
    for (int deg : {1, 2}) {
      const Poly Q = Poly::monomial(deg);
      const Poly1D f(Q);
      for (int n : {2, 3}) {
        for (double p : {1.0, 0.7}) {
          const double want = exact_cumulant_1d(J, Q, N, n, p);
          const auto got = quadrature_cumulant(*K, f, n, p);
          if (std::abs(want) > 1e-10) {
            CHECK(got.value == doctest::Approx(want).epsilon(1e-4));
          } else {
            CHECK(std::abs(got.value) < 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("variance ladder approaches the chebyshev limit") {
  const auto V = Potential1D::quadratic();
  const Poly x = Poly::monomial(1);
  double prev_gap = 1e9;
  for (int N : {25, 50, 100, 200}) {
    const auto J = herm(N, N + 40);
    const double c2 = exact_cumulant_1d(J, x, N, 2, 1.0);
    const double gap = std::abs(c2 - 0.25);
    // the linear statistic crosses the boundary through a single matrix
    // element, so the gap can sit at exactly zero
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.005);
}

TEST_CASE("right-limit cumulants") {
  CHECK(right_limit_cumulant(Poly::monomial(1), 2) ==
        doctest::Approx(0.25).epsilon(1e-10));
  CHECK(right_limit_cumulant(Poly::monomial(2), 2) ==
        doctest::Approx(0.125).epsilon(1e-10));
  CHECK(std::abs(right_limit_cumulant(Poly::monomial(1), 3)) < 1e-12);
  CHECK(std::abs(right_limit_cumulant(Poly::monomial(1), 4)) < 1e-10);
  CHECK_THROWS_AS(right_limit_cumulant(Poly::monomial(1), 1), range_error);

  SUBCASE("finite-N cumulants converge to the window limit") {
    const auto V = Potential1D::quadratic();
    for (int deg : {1, 2, 3}) {
      const Poly Q = Poly::monomial(deg);
      for (int n : {2, 3, 4}) {
        const double lim = right_limit_cumulant(Q, n);
        double prev = 1e9;  // non-strict: several gaps sit at roundoff
        for (int N : {25, 50, 100, 200}) {
          const auto J = herm(N, N + 60);
          const double gap =
              std::abs(exact_cumulant_1d(J, Q, N, n, 1.0) - lim);
          CHECK(gap <= prev + 1e-12);
          prev = gap;
        }
      }
    }
  }
}

TEST_CASE("quadrature engine basics") {
  const auto V = Potential1D::quadratic();
  const int N = 30;
  const auto J = herm(N, N + 40);
  const auto K = orthopoly::cd_kernel(J, V);

  SUBCASE("first cumulant is the weighted diagonal integral") {
    const Poly1D f(Poly::monomial(2));
    const auto r = quadrature_cumulant(*K, f, 1, 0.8);
    const Grid1D g = gl_panels(-K->extent(), K->extent(), 600, 8);
    const double want =
        0.8 * g.integrate([&](double x) { return x * x * K->diag({x, 0.0}); });
    CHECK(r.value == doctest::Approx(want).epsilon(1e-8));
  }

  SUBCASE("refinement error estimate is small") {
    const Poly1D f(Poly::monomial(1));
    const auto r = quadrature_cumulant(*K, f, 2, 1.0);
    CHECK(r.error < 1e-8);
  }
}

TEST_CASE("sine-kernel variance against the spectral formula") {
  // C^2 = \int min(|u|, rho) |fhat(u)|^2 du for the band kernel
  const Gaussian1D f(0.0, 1.0);
  for (double rho : {0.8, 2.0}) {
    const auto K = kernels::sine_kernel(rho);
    const auto got = quadrature_cumulant(*K, f, 2, 1.0);
    const Grid1D g = gl_panels(0.0, 6.0, 300, 8);
    const double want = 2.0 * g.integrate([&](double u) {
      return std::min(u, rho) * std::norm(f.fourier(u));
    });
    CHECK(got.value == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("thinning decomposition") {
  const auto V = Potential1D::quadratic();
  const int N = 30;
  const auto J = herm(N, N + 40);
  const auto K = orthopoly::cd_kernel(J, V);
  const Poly1D f(Poly::monomial(2));

  SUBCASE("q = 0 collapses to the unthinned cumulant") {
    const auto d = thinned_decomposition(*K, f, 2, 0.0);
    CHECK(d.diag_term == 0.0);
    CHECK(d.ups_term == 0.0);
    CHECK(d.sum() == doctest::Approx(d.base));
    CHECK(std::abs(d.residual()) < 1e-12);
  }

  SUBCASE("identity residual stays below 1e-6 across retentions") {
    for (double q : {0.1, 0.5}) {
      for (int n : {2, 3}) {
        const auto d = thinned_decomposition(*K, f, n, q);
        CHECK(std::abs(d.residual()) < 1e-6);
      }
    }
  }

  SUBCASE("leading correction is the first gamma coefficient") {
    // middle term ~ q * gamma(2,1)-weighted diagonal at first order, gamma(2,1)=1
    const double q = 1e-3;
    const auto d = thinned_decomposition(*K, f, 2, q);
    const Grid1D g = gl_panels(-K->extent(), K->extent(), 600, 8);
    const double diag2 =
        g.integrate([&](double x) { return std::pow(x, 4) * K->diag({x, 0.0}); });
    CHECK(d.diag_term == doctest::Approx(q * diag2).epsilon(2e-3));
  }

  SUBCASE("third term stays bounded as N doubles") {
    double prev = -1.0;
    for (int n2 : {20, 40, 80}) {
      const auto Jn = herm(n2, n2 + 40);
      const auto Kn = orthopoly::cd_kernel(Jn, V);
      const auto d = thinned_decomposition(*Kn, f, 2, 0.2);
      const double mag = std::abs(d.ups_by_m[1]);
      if (prev >= 0.0) CHECK(mag < 4.0 * (prev + 1.0));
      prev = mag;
    }
  }
}

TEST_CASE("2-d quadrature paths agree (radial fast path vs dense)") {
  const auto V = kernels::Potential2D::quadratic();
  const int N = 24;
  const auto K = kernels::ginibre_finite(V, N);
  // a radial statistic slightly off-center falls back to the dense path
  const Bump2D radial(cplx{0.0, 0.0}, 0.45);
  const Bump2D offset(cplx{1e-12, 0.0}, 0.45);
  for (int n : {1, 2, 3}) {
    const auto a = quadrature_cumulant(*K, radial, n, 0.9);
    const auto b = quadrature_cumulant(*K, offset, n, 0.9);
    CHECK(a.value == doctest::Approx(b.value).epsilon(5e-5));
  }
}

TEST_CASE("2-d variance against the monte-carlo-free second moment") {
  // C^2 = p tr(S_2) - p^2 tr(S_1^2) must be positive and dominated by the mean
  const auto V = kernels::Potential2D::quadratic();
  const auto K = kernels::ginibre_finite(V, 20);
  const RadialMonomialBump2D f(1, 0.45);
  const auto c1 = quadrature_cumulant(*K, f, 1, 1.0);
  const auto c2 = quadrature_cumulant(*K, f, 2, 1.0);
  CHECK(c1.value > 0.0);
  CHECK(c2.value > 0.0);
  CHECK(c2.value < c1.value);
}
