#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dpplab/core/quadrature.hpp"
#include "dpplab/core/special.hpp"
#include "dpplab/kernels.hpp"
#include "support/oracles.hpp"

using namespace dpplab;
using namespace dpplab::kernels;

namespace {

// 2-d reproducing residual |\int K(z,x)K(x,w) dA(x) - K(z,w)| via a polar
// grid wide enough for the kernel mass.
double reproducing_residual(const Kernel& K, Point z, Point w, double R) {
  const Grid2D g = polar_grid({0.0, 0.0}, R, 120, 6, 64);
  cplx s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += g.w[i] * K.eval(z, g.pts[i]) * K.eval(g.pts[i], w);
  return std::abs(s - K.eval(z, w));
}

}  // namespace

TEST_CASE("radial potential catalog") {
  const auto V = Potential2D::quadratic();
  CHECK(V(cplx{0.6, 0.8}) == doctest::Approx(1.0));
  CHECK(V.laplacian_s(0.3) == doctest::Approx(1.0));
  CHECK(V.growth_ok(1.0));
  const auto W = Potential2D::radial({1.0, 0.2});
  CHECK(W.radial_value(2.0) == doctest::Approx(2.0 + 0.2 * 4.0));
  CHECK(W.laplacian_s(2.0) == doctest::Approx(1.0 + 0.8 * 2.0));
  CHECK_THROWS_AS(Potential2D::radial({0.0, 1.0}), range_error);
}

TEST_CASE("equilibrium measure of the planar gas") {
  SUBCASE("quadratic droplet radius is 1/sqrt(2), density 2") {
    const auto V = Potential2D::quadratic();
    const auto eq = equilibrium_2d(V);
    CHECK(eq.radius() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(eq.density(cplx{0.1, 0.2}) == doctest::Approx(2.0));
    CHECK(eq.density(cplx{1.0, 0.0}) == 0.0);
    CHECK(eq.mass() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(eq.in_bulk(cplx{0.5, 0.0}));
    CHECK(!eq.in_bulk(cplx{2.0, 0.0}));
  }
  SUBCASE("quartic droplet still carries unit mass") {
    const auto V = Potential2D::radial({1.0, 0.2});
    const auto eq = equilibrium_2d(V);
    CHECK(eq.radius() < 1.0 / std::sqrt(2.0));
    CHECK(eq.mass() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("finite-N radial kernel") {
  const int N = 30;
  const auto V = Potential2D::quadratic();
  const auto K = ginibre_finite(V, N);
  CHECK(K->rank() == N);
  CHECK(K->dimension() == 2);

  SUBCASE("diagonal against the incomplete-gamma oracle") {
    // sum_{k<N} (2Ns)^k e^{-2Ns} / k! = Q(N, 2Ns)
    for (double r : {0.0, 0.3, 0.6, 0.707, 0.8, 1.0}) {
      const double s = r * r;
      const double want = 2.0 * N * gamma_q(N, 2.0 * N * s);
      CHECK(K->diag({r, 0.0}) == doctest::Approx(want).epsilon(1e-8));
    }
    CHECK(K->diag({0.0, 0.0}) == doctest::Approx(2.0 * N).epsilon(1e-10));
  }

  SUBCASE("hermitian symmetry and trace") {
    const Point z{0.3, 0.2}, w{-0.1, 0.5};
    CHECK(std::abs(K->eval(z, w) - std::conj(K->eval(w, z))) < 1e-12 * N);
    const Grid2D g = polar_grid({0.0, 0.0}, K->extent(), 220, 6, 32);
    double tr = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) tr += g.w[i] * K->diag(g.pts[i]);
    CHECK(tr == doctest::Approx(N).epsilon(1e-7));
  }

  SUBCASE("reproducing at sampled pairs") {
    CHECK(reproducing_residual(*K, {0.1, 0.0}, {0.2, 0.1}, K->extent()) < 1e-6);
    CHECK(reproducing_residual(*K, {0.0, 0.0}, {0.5, -0.3}, K->extent()) < 1e-6);
  }

  SUBCASE("matrix fill equals pointwise evaluation") {
    const Grid2D g = polar_grid({0.0, 0.0}, 0.5, 4, 4, 8);
    Mat<cplx> M;
    K->fill(g.pts, M);
    for (std::size_t i = 0; i < g.size(); i += 13)
      for (std::size_t j = 0; j < g.size(); j += 7)
        CHECK(std::abs(M(i, j) - K->eval(g.pts[i], g.pts[j])) < 1e-9 * N);
  }

  SUBCASE("mode integrals recover normalization") {
    const auto ones = radial_mode_integrals(
        *K, [](double) { return 1.0; }, K->extent() * K->extent());
    REQUIRE(ones.size() == static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) CHECK(ones[k] == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("local rescaling approaches the translation-invariant kernel") {
    // K^N(u/sqrt(N), v/sqrt(N))/N settles as N doubles; the quartic gas keeps
    // the convergence visible (the quadratic one is at machine epsilon by N=40)
    const auto Vq = Potential2D::radial({1.0, 0.1});
    const cplx u{0.2, 0.1}, v{-0.3, 0.2};
    double prev_gap = 1e9;
    cplx prev{0.0, 0.0};
    bool first = true;
    for (int n : {40, 80, 160}) {
      const auto Kn = ginibre_finite(Vq, n);
      const double sc = 1.0 / std::sqrt(static_cast<double>(n));
      const cplx val = Kn->eval(to_point(u * sc), to_point(v * sc)) /
                       static_cast<double>(n);
      if (!first) {
        const double gap = std::abs(val - prev);
        CHECK(gap < prev_gap);
        prev_gap = gap;
      }
      prev = val;
      first = false;
    }
  }
}

TEST_CASE("translation-invariant planar kernel") {
  const double rho = 3.0;
  const auto K = ginibre_infinite(rho);
  CHECK(K->diag({1.7, -2.4}) == doctest::Approx(rho));
  CHECK(std::abs(K->eval({0, 0}, {1, 0})) ==
        doctest::Approx(rho * std::exp(-rho / 2)).epsilon(1e-12));
  // |K(z,w)| = rho e^{-rho|z-w|^2/2}
  const Point z{0.3, 0.4}, w{-0.2, 0.9};
  const double d2 = std::norm(to_cplx(z) - to_cplx(w));
  CHECK(std::abs(K->eval(z, w)) ==
        doctest::Approx(rho * std::exp(-rho * d2 / 2)).epsilon(1e-12));
  CHECK(reproducing_residual(*K, {0.1, 0.0}, {0.0, 0.2}, std::sqrt(60.0 / rho)) <
        1e-6);
}

TEST_CASE("sine kernel") {
  const double rho = 2.5;
  const auto K = sine_kernel(rho);
  CHECK(K->diag({0.4, 0.0}) == doctest::Approx(rho));
  CHECK(std::abs(K->eval({0.0, 0.0}, {1.0 / rho, 0.0})) < 1e-14);
  // reproducing on a window: the residual is truncation-limited at the level
  // cos(pi rho (z-w)) / (pi^2 L) and halves as the window doubles
  const double z = 0.2, w = -0.35;
  auto residual = [&](double L) {
    const Grid1D g = gl_panels(-L, L, static_cast<int>(40 * L * rho), 8);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      s += g.w[i] * K->eval({z, 0}, {g.x[i], 0}).real() *
           K->eval({g.x[i], 0}, {w, 0}).real();
    return std::abs(s - K->eval({z, 0}, {w, 0}).real());
  };
  const double r1 = residual(40.0 / rho), r2 = residual(80.0 / rho);
  CHECK(r1 < 6e-3);
  CHECK(r2 < 0.7 * r1);
}

TEST_CASE("bergman approximation and gauge transform") {
  SUBCASE("quadratic: exact identity with the translation-invariant kernel") {
    const auto V = Potential2D::quadratic();
    const int N = 25;
    const auto B = bergman_approx(V, N, cplx{0.0, 0.0});
    CHECK(B.data.taylor_remainder == 0.0);
    // diagonal data: Phi(z,z) = V, b0 = 2, b1 = 0  =>  B(z,z) = 2N
    for (double r : {0.0, 0.2, 0.5})
      CHECK(B.kernel->diag({r, 0.0}) == doctest::Approx(2.0 * N).epsilon(1e-12));
    // gauge is trivial at the center and B equals the rho = 2N limit kernel
    CHECK(B.data.gauge(cplx{0.3, 0.2}) == doctest::Approx(0.0));
    const auto G = gauge_rescale(B, N);
    const auto Kinf = ginibre_infinite(2.0 * N);
    for (const Point u : {Point{0.1, 0.05}, Point{-0.2, 0.1}})
      for (const Point v : {Point{0.0, 0.0}, Point{0.15, -0.1}})
        CHECK(std::abs(G->eval(u, v) - Kinf->eval(u, v)) <
              1e-12 * std::abs(Kinf->eval(u, v)));
  }

  SUBCASE("quartic: polarization diagonals and bulk rejection") {
    const auto V = Potential2D::radial({1.0, 0.1});
    const auto eq = equilibrium_2d(V);
    CHECK_THROWS_AS(bergman_approx(V, 20, cplx{2.0, 0.0}), range_error);
    const cplx x0{0.3, 0.0};
    const auto B = bergman_approx(V, 20, x0);
    // on-diagonal polarization identities on a bulk grid
    for (double r : {0.05, 0.2, 0.4}) {
      const cplx z{r, 0.1};
      const double s = std::norm(z);
      CHECK(V.phi_polarized(s).real() == doctest::Approx(V.radial_value(s)).epsilon(1e-12));
      CHECK(V.lap_polarized(s).real() ==
            doctest::Approx(V.laplacian_s(s)).epsilon(1e-12));
      // b1 diagonal vs a finite-difference Laplacian of log(Delta V)
      auto logdv = [&](double x, double y) {
        return std::log(V.laplacian_s(x * x + y * y));
      };
      const double h = 1e-4;
      const double lap = (logdv(z.real() + h, z.imag()) +
                          logdv(z.real() - h, z.imag()) +
                          logdv(z.real(), z.imag() + h) +
                          logdv(z.real(), z.imag() - h) - 4 * logdv(z.real(), z.imag())) /
                         (4.0 * h * h);
      CHECK(V.b1_polarized(s).real() == doctest::Approx(0.5 * lap).epsilon(1e-4));
    }
    // gauge transform keeps the kernel hermitian with a real positive diagonal
    const auto G = gauge_rescale(B, 20);
    const Point u{0.02, 0.01}, v{-0.03, 0.02};
    CHECK(std::abs(G->eval(u, v) - std::conj(G->eval(v, u))) < 1e-10);
    CHECK(G->eval(u, u).imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(G->eval(u, u).real() > 0.0);
  }

  SUBCASE("quartic trend: kernel-vs-approximation gap shrinks like 1/N") {
    const auto V = Potential2D::radial({1.0, 0.1});
    const cplx x0{0.0, 0.0};
    double prev = 1e18;
    for (int N : {40, 80, 160}) {
      const auto K = ginibre_finite(V, N);
      const auto B = bergman_approx(V, N, x0);
      double sup = 0.0;
      const Grid2D g = polar_grid({0.0, 0.0}, 0.15, 6, 4, 16);
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); j += 5)
          sup = std::max(sup, std::abs(K->eval(g.pts[i], g.pts[j]) -
                                       B.kernel->eval(g.pts[i], g.pts[j])));
      CHECK(sup < prev);
      prev = sup;
    }
  }

  SUBCASE("quartic trend: gauged ratio against the local limit improves") {
    const auto V = Potential2D::radial({1.0, 0.1});
    const auto eq = equilibrium_2d(V);
    const cplx x0{0.3, 0.0};
    double prev = 1e18;
    for (int N : {40, 80, 160}) {
      const auto B = bergman_approx(V, N, x0);
      const auto G = gauge_rescale(B, N);
      const double rho = N * eq.density(x0);
      const auto Kinf = ginibre_infinite(rho);
      // disk radius ~ N^{-1/2}: several correlation lengths, shrinking scale
      const double rN = 1.5 / std::sqrt(static_cast<double>(N));
      const Grid2D g = polar_grid({0.0, 0.0}, rN, 5, 3, 12);
      double worst = 0.0;
      for (std::size_t i = 0; i < g.size(); i += 3)
        for (std::size_t j = 0; j < g.size(); j += 7) {
          const cplx kv = Kinf->eval(g.pts[i], g.pts[j]);
          if (std::abs(kv) < 1e-8 * rho) continue;
          worst = std::max(worst,
                           std::abs(G->eval(g.pts[i], g.pts[j]) / kv - 1.0));
        }
      CHECK(worst < prev);
      prev = worst;
    }
  }
}

TEST_CASE("decay diagnostics") {
  SUBCASE("translation-invariant kernel recovers the gaussian rate rho/2") {
    const double rho = 6.0;
    const auto K = ginibre_infinite(rho);
    const auto rep = decay_diagnostics(*K, {0.0, 0.0}, 0.4, 100, 4.0);
    CHECK(rep.gaussian_fit);
    CHECK(rep.rate == doctest::Approx(rho / 2).epsilon(0.01));
    CHECK(rep.rate_residual < 1e-6);
  }

  SUBCASE("finite kernel: positive fitted rate, tiny truncation tail") {
    const int N = 100;
    const auto V = Potential2D::quadratic();
    const auto eq = equilibrium_2d(V);
    const auto K = ginibre_finite(V, N);
    const auto rep =
        decay_diagnostics(*K, {0.0, 0.0}, 0.5 * eq.radius(), N, 4.0, eq.radius());
    CHECK(!rep.gaussian_fit);
    CHECK(rep.rate_positive());
    CHECK(rep.tail_mass >= 0.0);
    CHECK(rep.tail_mass < 1e-3 / N);
    CHECK(rep.far_diag < N * 1e-6);  // diagonal at twice the droplet radius
    CHECK(rep.eps_N == doctest::Approx(4.0 * std::log(100.0) / 10.0));
  }
}
