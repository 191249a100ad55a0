#include "dpplab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpplab/core/quadrature.hpp"

namespace dpplab::limits {

using std::numbers::pi;

double h1_variance(const TestFunction2D& f) {
  const double rad = f.support_radius();
  require(std::isfinite(rad), "h1_variance: compact (effective) support needed");
  const cplx c = f.center();
  auto run = [&](int rp, int ang) {
    const Grid2D g = polar_grid({c.real(), c.imag()}, rad, rp, 6, ang);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      s += g.w[i] * std::norm(f.d(to_cplx(g.pts[i])));
    return s;
  };
  double prev = run(60, 48);
  for (int r = 1; r <= 3; ++r) {
    const double cur = run(60 << r, 48 << r);
    if (std::abs(cur - prev) <= 1e-8 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

double chebyshev_coeff(const TestFunction1D& f, int k, int nodes) {
  double s = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double th = pi * (j + 0.5) / nodes;
    s += f(std::cos(th)) * std::cos(k * th);
  }
  return 2.0 * s / nodes;
}

double chebyshev_variance(const TestFunction1D& f) {
  int kmax;
  if (const auto* p = dynamic_cast<const Poly1D*>(&f)) {
    kmax = p->poly().degree();
  } else {
    require(std::abs(f.center()) + f.support_radius() <= 1.0,
            "chebyshev_variance: support must lie in [-1,1]");
    kmax = 255;
  }
  double acc = 0.0, tail = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double ck = chebyshev_coeff(f, k);
    const double term = 0.25 * k * ck * ck;
    acc += term;
    tail = (term < 1e-14) ? tail + 1 : 0;
    if (tail >= 4 && k >= 8) break;
  }
  return acc;
}

double h_half_variance(const TestFunction1D& f) {
  require(f.has_fourier(), "h_half_variance: Fourier transform needed");
  double U = 4.0;
  const double f0 = std::abs(f.fourier(0.0)) + 1e-300;
  while (std::abs(f.fourier(U)) > 1e-10 * f0 && U < 1e5) U *= 2.0;
  auto run = [&](int panels) {
    const Grid1D g = gl_panels(0.0, U, panels, 8);
    return g.integrate([&](double u) { return u * std::norm(f.fourier(u)); });
  };
  const double v1 = run(160), v2 = run(320);
  if (std::abs(v2 - v1) > 1e-6 * std::max(1.0, std::abs(v2)))
    throw numeric_error("h_half_variance: frequency grid not converged");
  return v2;
}

namespace {

double poisson_integral(const TestFunction1D& f, const Intensity1D& eta, int n) {
  if (eta.eq) {
    // x = c + r sin(theta) keeps the square-root bulk edges smooth
    const double c = 0.5 * (eta.eq->left + eta.eq->right);
    const double r = 0.5 * (eta.eq->right - eta.eq->left);
    const Grid1D g = gl_panels(-pi / 2, pi / 2, 200, 8);
    return g.integrate([&](double th) {
      const double x = c + r * std::sin(th);
      return std::pow(f(x), n) * eta.eq->density(x) * r * std::cos(th);
    });
  }
  require(std::isfinite(f.support_radius()),
          "poisson integral: constant intensity needs compact support");
  const double lo = f.center() - f.support_radius();
  const double hi = f.center() + f.support_radius();
  if (hi <= lo) return 0.0;
  const Grid1D g = gl_panels(lo, hi, 400, 8);
  return g.integrate([&](double x) { return std::pow(f(x), n) * eta.constant; });
}

double poisson_integral(const TestFunction2D& f, const Intensity2D& eta, int n) {
  double rad = f.support_radius();
  cplx c = f.center();
  if (eta.eq) {
    if (!std::isfinite(rad) || std::abs(c) + rad > eta.eq->radius()) {
      rad = eta.eq->radius();
      c = 0.0;
    }
  } else {
    require(std::isfinite(rad),
            "poisson integral: constant intensity needs compact support");
  }
  const Grid2D g = polar_grid({c.real(), c.imag()}, rad, 240, 6, 96);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx z = to_cplx(g.pts[i]);
    const double w = eta.eq ? eta.eq->density(z) : eta.constant;
    if (w != 0.0) s += g.w[i] * std::pow(f(z), n) * w;
  }
  return s;
}

}  // namespace

double poisson_cumulant(const TestFunction1D& f, const Intensity1D& eta, int n) {
  require(n >= 1, "poisson_cumulant: n >= 1");
  if (n == 1) return 0.0;  // mean-zero process
  return poisson_integral(f, eta, n);
}

double poisson_cumulant(const TestFunction2D& f, const Intensity2D& eta, int n) {
  require(n >= 1, "poisson_cumulant: n >= 1");
  if (n == 1) return 0.0;
  return poisson_integral(f, eta, n);
}

double crossover_cumulant(const TestFunction2D& f, int n, double tau, Setting s,
                          const kernels::EquilibriumMeasure2D* eq) {
  require(n >= 2, "crossover_cumulant: n >= 2");
  require(s == Setting::macro2d || s == Setting::meso2d,
          "crossover_cumulant: 2-d setting expected");
  double gauss = 0.0;
  if (n == 2) gauss = h1_variance(f);
  const double sign = (n % 2) ? -1.0 : 1.0;
  double pois;
  if (s == Setting::macro2d) {
    require(eq != nullptr, "macroscopic crossover needs the equilibrium measure");
    pois = poisson_cumulant(f, Intensity2D::equilibrium(*eq), n);
  } else {
    pois = poisson_cumulant(f, Intensity2D::lebesgue(), n);
  }
  return gauss + tau * sign * pois;
}

double crossover_cumulant(const TestFunction1D& f, int n, double tau, Setting s,
                          const orthopoly::EquilibriumMeasure1D* eq) {
  require(n >= 2, "crossover_cumulant: n >= 2");
  require(s == Setting::macro1d || s == Setting::meso1d,
          "crossover_cumulant: 1-d setting expected");
  double gauss = 0.0;
  if (n == 2) {
    // mesoscopic variance matches the large-density sine-kernel limit
    // \int_R |u| |fhat|^2 du == twice the half-line energy
    gauss = (s == Setting::macro1d) ? chebyshev_variance(f)
                                    : 2.0 * h_half_variance(f);
  }
  const double sign = (n % 2) ? -1.0 : 1.0;
  double pois;
  if (s == Setting::macro1d) {
    require(eq != nullptr, "macroscopic crossover needs the equilibrium measure");
    pois = poisson_cumulant(f, Intensity1D::equilibrium(*eq), n);
  } else {
    pois = poisson_cumulant(f, Intensity1D::lebesgue(), n);
  }
  return gauss + tau * sign * pois;
}

// ---------------------------------------------------------------------------
// Loop integral

LoopPoly& LoopPoly::add(cplx c, std::vector<int> we, std::vector<int> wbe) {
  require(static_cast<int>(we.size()) == n && static_cast<int>(wbe.size()) == n,
          "loop polynomial: exponent lists must have length n");
  int deg = 0;
  for (int e : we) deg += e;
  for (int e : wbe) deg += e;
  require(deg <= 2, "loop polynomial: total degree <= 2");
  terms.push_back({c, std::move(we), std::move(wbe)});
  return *this;
}

double ginibre_loop_closed_form(const LoopPoly& H) {
  // Only monomials of the exact shape w_s conj(w_r) survive d_s dbar_r at 0.
  cplx acc = 0.0;
  for (const auto& t : H.terms) {
    int s = -1, r = -1;
    bool other = false;
    for (int i = 0; i < H.n; ++i) {
      if (t.wexp[i] == 1) {
        if (s < 0)
          s = i;
        else
          other = true;
      } else if (t.wexp[i] != 0) {
        other = true;
      }
      if (t.wbarexp[i] == 1) {
        if (r < 0)
          r = i;
        else
          other = true;
      } else if (t.wbarexp[i] != 0) {
        other = true;
      }
    }
    if (other || s < 0 || r < 0) continue;
    if (r <= s) acc += t.coeff;
  }
  return acc.real();
}

namespace {

cplx eval_loop(const LoopMonomial& t, const std::vector<cplx>& w) {
  cplx v = t.coeff;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (int e = 0; e < t.wexp[i]; ++e) v *= w[i];
    for (int e = 0; e < t.wbarexp[i]; ++e) v *= std::conj(w[i]);
  }
  return v;
}

}  // namespace

std::vector<double> ginibre_loop_quadrature(const std::vector<LoopPoly>& Hs,
                                            double rho) {
  require(!Hs.empty(), "loop quadrature: no polynomials");
  for (const auto& H : Hs)
    require(H.n == 2, "loop quadrature implemented for n = 2");
  const KernelHandle K = kernels::ginibre_infinite(rho);
  const double R = std::sqrt(50.0 / rho);
  const Grid2D g = polar_grid({0.0, 0.0}, R, 18, 6, 32);
  const std::size_t M = g.size();
  const Point origin{0.0, 0.0};
  std::vector<cplx> K0(M), Kto0(M);
  for (std::size_t i = 0; i < M; ++i) {
    K0[i] = K->eval(origin, g.pts[i]);
    Kto0[i] = K->eval(g.pts[i], origin);
  }
  std::vector<cplx> acc(Hs.size(), 0.0);
  std::vector<cplx> w(2);
  for (std::size_t i = 0; i < M; ++i) {
    w[0] = to_cplx(g.pts[i]);
    for (std::size_t j = 0; j < M; ++j) {
      w[1] = to_cplx(g.pts[j]);
      const cplx chain = K0[i] * K->eval(g.pts[i], g.pts[j]) * Kto0[j] *
                         (g.w[i] * g.w[j]);
      for (std::size_t h = 0; h < Hs.size(); ++h) {
        cplx hv = 0.0;
        for (const auto& t : Hs[h].terms) hv += eval_loop(t, w);
        acc[h] += hv * chain;
      }
    }
  }
  std::vector<double> out(Hs.size());
  for (std::size_t h = 0; h < Hs.size(); ++h) out[h] = acc[h].real();
  return out;
}

double ginibre_loop_quadrature(const LoopPoly& H, double rho) {
  return ginibre_loop_quadrature(std::vector<LoopPoly>{H}, rho)[0];
}

// ---------------------------------------------------------------------------
// Sine-kernel main term

namespace {

struct CompData {
  std::vector<int> prefixes;  // checkpoint positions k_1, k_1+k_2, ...
  double weight;
};

double psi_max(const CompData& c, const double* partial) {
  // 2 max(0, partial sums at the checkpoints)
  double m = 0.0;
  for (int p : c.prefixes) m = std::max(m, partial[p - 1]);
  return 2.0 * m;
}

}  // namespace

HyperplaneResult sine_main_term(const TestFunction1D& f, int n,
                                const combi::UpsilonMap& Y, long budget) {
  require(n == 2 || n == 3, "sine_main_term: n in {2,3}");
  require(f.has_fourier(), "sine_main_term: Fourier transform needed");

  std::vector<CompData> comps;
  for (const auto& k : combi::compositions(n)) {
    CompData c;
    c.weight = static_cast<double>(combi::upsilon(Y, k));
    int pre = 0;
    for (int j = 0; j + 1 < k.length(); ++j) {
      pre += k.parts[j];
      c.prefixes.push_back(pre);
    }
    if (c.weight != 0.0) comps.push_back(std::move(c));
  }

  double U = 4.0;
  const double f0 = std::abs(f.fourier(0.0)) + 1e-300;
  while (std::abs(f.fourier(U)) > 1e-9 * f0 && U < 4096.0) U *= 2.0;

  HyperplaneResult res;
  if (n == 2) {
    auto run = [&](int panels) {
      // split at 0 where the checkpoint maxima kink
      const Grid1D gp = gl_panels(0.0, U, panels, 8);
      const Grid1D gm = gl_panels(-U, 0.0, panels, 8);
      double s = 0.0;
      auto term = [&](double u, double wq) {
        const cplx a = f.fourier(u), b = f.fourier(-u);
        double partial[2] = {u, 0.0};
        double wsum = 0.0;
        for (const auto& c : comps) wsum += c.weight * psi_max(c, partial);
        s += wq * (a * b).real() * wsum;
      };
      for (std::size_t i = 0; i < gp.size(); ++i) term(gp.x[i], gp.w[i]);
      for (std::size_t i = 0; i < gm.size(); ++i) term(gm.x[i], gm.w[i]);
      res.evals += 2 * static_cast<long>(gp.size() + gm.size());
      return s;
    };
    const double v1 = run(120), v2 = run(240);
    res.value = v2;
    res.achieved_tol = std::abs(v2 - v1);
    return res;
  }

  // n = 3: tensor panels over (u1,u2) with u3 = -u1-u2; kinks lie on the
  // axes and the antidiagonal, so convergence is audited by panel doubling.
  auto run = [&](int half_panels) {
    const Grid1D base = gl_panels(-U, U, 2 * half_panels, 6);
    const std::size_t M = base.size();
    std::vector<cplx> fhat(M);
    for (std::size_t i = 0; i < M; ++i) fhat[i] = f.fourier(base.x[i]);
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      const double u1 = base.x[i];
      for (std::size_t j = 0; j < M; ++j) {
        const double u2 = base.x[j];
        const double u3 = -u1 - u2;
        if (std::abs(u3) > U) continue;
        double partial[3] = {u1, u1 + u2, 0.0};
        double wsum = 0.0;
        for (const auto& c : comps) wsum += c.weight * psi_max(c, partial);
        if (wsum == 0.0) continue;
        const cplx prod = fhat[i] * fhat[j] * f.fourier(u3);
        s += base.w[i] * base.w[j] * prod.real() * wsum;
      }
    }
    res.evals += static_cast<long>(M * M);
    return s;
  };
  int hp = 40;
  double v1 = run(hp), v2 = run(2 * hp);
  while (std::abs(v2 - v1) > 1e-5 * std::max(1.0, std::abs(v2)) &&
         res.evals < budget) {
    hp *= 2;
    v1 = v2;
    v2 = run(2 * hp);
  }
  res.value = v2;
  res.achieved_tol = std::abs(v2 - v1);
  return res;
}

// ---------------------------------------------------------------------------
// Integrated density of states

double ids_zeta(const orthopoly::EquilibriumMeasure1D& eq, double x0,
                double alpha, double Ngas, double x) {
  require(alpha > 0.0 && alpha < 1.0, "ids_zeta: alpha in (0,1)");
  require(x0 > eq.left && x0 < eq.right, "ids_zeta: x0 must be in the bulk");
  const double Na = std::pow(Ngas, alpha);
  const double y = eq.F(x0) + eq.density(x0) * x / Na;
  return Na * (eq.G(y) - x0);
}

}  // namespace dpplab::limits
