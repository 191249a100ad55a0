#include "dpplab/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "dpplab/combi.hpp"
#include "dpplab/core/csv.hpp"
#include "dpplab/core/quadrature.hpp"
#include "dpplab/kernels.hpp"

namespace dpplab::cumulants {

using combi::Composition;
using combi::UpsilonMap;

// ---------------------------------------------------------------------------
// Thinning schedules

ThinningRegime ThinningRegime::critical(double tau) {
  require(tau > 0.0, "critical thinning: tau > 0");
  return {Kind::critical, tau, 1.0};
}

ThinningRegime ThinningRegime::sub(double tau, double s) {
  require(tau > 0.0 && s > 1.0, "sub-critical thinning: tau > 0, s > 1");
  return {Kind::sub, tau, s};
}

ThinningRegime ThinningRegime::super(double tau, double s) {
  require(tau > 0.0 && s > 0.0 && s < 1.0, "super-critical thinning: 0 < s < 1");
  return {Kind::super, tau, s};
}

double ThinningRegime::q_at(int N) const {
  if (kind == Kind::none) return 0.0;
  const double q = tau * std::pow(static_cast<double>(N), -s);
  require(q < 1.0, "thinning schedule: q must stay below 1");
  return q;
}

std::string ThinningRegime::label() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::critical: return "critical";
    case Kind::sub: return "sub";
    default: return "super";
  }
}

double macro_T(int N, double q) { return N * q; }

double meso_T_2d(int N, double q, double L, double rho_x0) {
  return N * q * rho_x0 / (L * L);
}

double meso_T_1d(int N, double q, double alpha, double rho_x0) {
  return q * std::pow(static_cast<double>(N), 1.0 - alpha) * rho_x0;
}

std::vector<std::string> CumulantEntry::csv_header() {
  return {"model", "N", "alpha", "n", "p", "q", "T_N", "method", "value",
          "stderr", "target", "regime"};
}

std::vector<std::string> CumulantEntry::cells() const {
  return {model,        std::to_string(N), fmt_g(alpha),  std::to_string(order),
          fmt_g(p),     fmt_g(q),          fmt_g(T),      method,
          fmt_g(value), fmt_g(stderr_),    fmt_g(target), regime};
}

// ---------------------------------------------------------------------------
// Exact engine: trace-log expansion on a (projected) band matrix

namespace {

Mat<double> dense_jacobi(const orthopoly::JacobiMatrix& J, int T) {
  Mat<double> M(T, T);
  for (int i = 0; i < T; ++i) {
    M(i, i) = J.b[i];
    if (i + 1 < T) {
      M(i, i + 1) = J.a[i];
      M(i + 1, i) = J.a[i];
    }
  }
  return M;
}

Mat<double> horner(const Poly& Q, const Mat<double>& X) {
  const int d = Q.degree();
  const std::size_t T = X.rows;
  Mat<double> A(T, T);
  for (std::size_t i = 0; i < T; ++i) A(i, i) = Q.coeffs[d];
  for (int j = d - 1; j >= 0; --j) {
    A = A * X;
    for (std::size_t i = 0; i < T; ++i) A(i, i) += Q.coeffs[j];
  }
  return A;
}

// C^1..C^maxn of log det(I + p P(e^{lambda A} - 1)P) with P the projector
// onto the first `proj` indices; the lambda-series is truncated at maxn.
std::vector<double> tracelog_cumulants(const Mat<double>& A, int proj, int maxn,
                                       double p) {
  std::vector<Mat<double>> E;  // projected blocks of A^i / i!
  E.reserve(maxn);
  Mat<double> power = A;
  double fact = 1.0;
  for (int i = 1; i <= maxn; ++i) {
    if (i > 1) {
      power = power * A;
      fact *= i;
    }
    Mat<double> blk = power.block(proj, proj);
    blk *= 1.0 / fact;
    E.push_back(std::move(blk));
  }

  std::vector<double> total(maxn + 1, 0.0);
  // cur[i] = lambda^i coefficient of M(lambda)^l, M = sum lambda^i E[i-1]
  std::vector<Mat<double>> cur(maxn + 1);
  for (int i = 1; i <= maxn; ++i) cur[i] = E[i - 1];
  for (int i = 1; i <= maxn; ++i) total[i] += p * cur[i].trace();
  for (int l = 2; l <= maxn; ++l) {
    std::vector<Mat<double>> nxt(maxn + 1);
    for (int i = l; i <= maxn; ++i) {
      Mat<double> acc(proj, proj);
      for (int a = l - 1; a <= i - 1; ++a) acc += cur[a] * E[i - a - 1];
      nxt[i] = std::move(acc);
    }
    cur = std::move(nxt);
    const double coef = ((l % 2) ? 1.0 : -1.0) / l * std::pow(p, l);
    for (int i = l; i <= maxn; ++i) total[i] += coef * cur[i].trace();
  }

  std::vector<double> out(maxn + 1, 0.0);
  double nf = 1.0;
  for (int n = 1; n <= maxn; ++n) {
    nf *= n;
    out[n] = nf * total[n];
  }
  return out;
}

}  // namespace

std::vector<double> exact_cumulants_1d(const orthopoly::JacobiMatrix& J,
                                       const Poly& Q, int N, int max_order,
                                       double p) {
  const int d = Q.degree();
  require(d <= 6, "exact engine: deg Q <= 6");
  require(max_order >= 1 && max_order <= 6, "exact engine: order <= 6");
  require(p > 0.0 && p <= 1.0, "exact engine: retention in (0,1]");
  require(N >= 1 && J.N == N, "exact engine: J built for this gas size");
  const int T0 = N + max_order * std::max(1, d) + 8;
  require(J.size >= T0 + 8,
          "exact engine: Jacobi truncation too small for the audit margin");

  auto run = [&](int T) {
    const Mat<double> A = horner(Q, dense_jacobi(J, T));
    return tracelog_cumulants(A, N, max_order, p);
  };
  const std::vector<double> v0 = run(T0);
  const std::vector<double> v1 = run(T0 + 8);
  for (int n = 1; n <= max_order; ++n) {
    if (std::abs(v1[n] - v0[n]) > 1e-10 * std::max(1.0, std::abs(v1[n])))
      throw numeric_error("exact engine: truncation margin insufficient at order " +
                          std::to_string(n));
  }
  return v1;
}

double exact_cumulant_1d(const orthopoly::JacobiMatrix& J, const Poly& Q, int N,
                         int order, double p) {
  return exact_cumulants_1d(J, Q, N, order, p)[order];
}

// ---------------------------------------------------------------------------
// Path-enumeration oracle

double path_cumulant_oracle(const orthopoly::JacobiMatrix& J, const Poly& Q,
                            int N, int order) {
  const int d = std::max(1, Q.degree());
  require(N >= 1 && N <= 12, "path oracle: N <= 12");
  require(Q.degree() <= 2, "path oracle: deg Q <= 2");
  require(order >= 1 && order <= 4, "path oracle: order <= 4");
  const int T = N + order * d + 2;
  require(J.size >= T, "path oracle: Jacobi truncation too small");
  const Mat<double> A = horner(Q, dense_jacobi(J, T));

  // Per-path weight depends only on which intermediate times sit at index >= N.
  const int nbits = order - 1;
  std::vector<double> W(std::size_t{1} << nbits, 0.0);
  const auto comps = combi::compositions(order);
  for (std::size_t mask = 0; mask < W.size(); ++mask) {
    combi::Rational acc = 0;
    for (const auto& k : comps) {
      bool hit = false;
      int pre = 0;
      for (int j = 0; j + 1 < k.length(); ++j) {
        pre += k.parts[j];
        if ((mask >> (pre - 1)) & 1u) {
          hit = true;
          break;
        }
      }
      if (!hit) acc += combi::upsilon(UpsilonMap::base_map(), k);
    }
    W[mask] = -static_cast<double>(acc);
  }

  double total = 0.0;
  std::vector<int> pos(order + 1);
  std::function<void(int, double, unsigned)> dfs = [&](int depth, double prod,
                                                       unsigned mask) {
    if (depth == order) {
      if (pos[depth] == pos[0]) total += prod * W[mask];
      return;
    }
    const int cur = pos[depth];
    for (int nxt = std::max(0, cur - d); nxt <= std::min(T - 1, cur + d); ++nxt) {
      const double a = A(cur, nxt);
      if (a == 0.0) continue;
      pos[depth + 1] = nxt;
      unsigned m2 = mask;
      if (depth + 1 <= order - 1 && nxt >= N) m2 |= 1u << depth;
      dfs(depth + 1, prod * a, m2);
    }
  };
  for (int m = 0; m < N; ++m) {
    pos[0] = m;
    dfs(0, 1.0, 0u);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Right-limit (Toeplitz window) cumulant

double right_limit_cumulant(const Poly& Q, int order) {
  const int d = std::max(1, Q.degree());
  require(Q.degree() <= 6, "right limit: deg Q <= 6");
  require(order >= 2 && order <= 6,
          "right limit: order >= 2 (the first cumulant diverges with N)");

  auto run = [&](int W) {
    const int S = 2 * W;
    orthopoly::JacobiMatrix L;
    L.N = W;
    L.size = S;
    L.b.assign(S, 0.0);
    L.a.assign(S - 1, 0.5);
    L.log_m0 = 0.0;
    const Mat<double> A = horner(Q, dense_jacobi(L, S));
    return tracelog_cumulants(A, W, order, 1.0)[order];
  };
  const int W0 = order * d + 8;
  const double v0 = run(W0);
  const double v1 = run(W0 + 8);
  if (std::abs(v1 - v0) > 1e-10 * std::max(1.0, std::abs(v1)))
    throw numeric_error("right limit: window insufficient");
  return v1;
}

// ---------------------------------------------------------------------------
// Quadrature engine

namespace {

// Cyclic-trace engine over one of three representations:
//  - diag: radial finite kernel + radial statistic, modes decouple
//  - coef: finite-rank kernel, S_j = Phi^H D_{w f^j} Phi   (N x N)
//  - node: dense kernel matrix on the grid                 (M x M)
struct Engine {
  enum class Mode { diag, coef_r, coef_c, node_r, node_c } mode;
  int max_power = 0;
  std::vector<std::vector<double>> D;  // diag mode, per power 1..max
  std::vector<Mat<double>> Sr;         // real matrices per power (0 used by node)
  std::vector<Mat<cplx>> Sc;
  std::vector<double> diag_ints;  // \int f^j K(x,x) dmu, j = 1..max

  double cycle(std::span<const int> powers) const {
    switch (mode) {
      case Mode::diag: {
        const std::size_t n = D[1].size();
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double prod = 1.0;
          for (int pw : powers)
            if (pw > 0) prod *= D[pw][k];
          s += prod;
        }
        return s;
      }
      case Mode::coef_r:
      case Mode::node_r: {
        const Mat<double>* first = nullptr;
        Mat<double> acc;
        for (int pw : powers) {
          if (pw == 0 && mode == Mode::coef_r) continue;
          const Mat<double>& S = Sr[pw];
          if (!first) {
            first = &S;
            acc = S;
          } else {
            acc = acc * S;
          }
        }
        return acc.trace();
      }
      default: {
        const Mat<cplx>* first = nullptr;
        Mat<cplx> acc;
        for (int pw : powers) {
          if (pw == 0 && mode == Mode::coef_c) continue;
          const Mat<cplx>& S = Sc[pw];
          if (!first) {
            first = &S;
            acc = S;
          } else {
            acc = acc * S;
          }
        }
        return acc.trace().real();
      }
    }
  }
};

struct Domain1D {
  double lo = 0.0, hi = 0.0;
};

Domain1D domain_1d(const Kernel& K, const TestFunction1D& f) {
  Domain1D d;
  const double ext = K.extent();
  const double rad = f.support_radius();
  if (std::isfinite(rad)) {
    d.lo = f.center() - rad;
    d.hi = f.center() + rad;
    if (std::isfinite(ext)) {
      d.lo = std::max(d.lo, -ext);
      d.hi = std::min(d.hi, ext);
    }
  } else {
    require(std::isfinite(ext),
            "quadrature: unbounded statistic needs a finite-rank kernel");
    d.lo = -ext;
    d.hi = ext;
  }
  require(d.hi > d.lo, "quadrature: empty domain");
  return d;
}

Grid1D grid_1d(const Kernel& K, const Domain1D& dom, double density) {
  double rho = 1.0;
  for (double t : {0.05, 0.25, 0.5, 0.75, 0.95})
    rho = std::max(rho, K.diag({dom.lo + t * (dom.hi - dom.lo), 0.0}));
  const int panels = std::max(
      24, static_cast<int>(std::ceil((dom.hi - dom.lo) * rho * 1.2 * density)));
  return gl_panels(dom.lo, dom.hi, panels, 8);
}

Grid2D grid_2d(const Kernel& K, const TestFunction2D& f, double density) {
  const double rad = f.support_radius();
  require(std::isfinite(rad), "quadrature: 2-d statistic needs compact support");
  const cplx c = f.center();
  double rho = 1.0;
  for (double t : {0.0, 0.4, 0.8})
    rho = std::max(rho, K.diag({c.real() + t * rad, c.imag()}));
  const double lc = 1.0 / std::sqrt(rho);
  const int rp = std::max(6, static_cast<int>(std::ceil(rad / lc * 1.3 * density)));
  int ang = static_cast<int>(std::ceil(2.0 * std::numbers::pi * rad / lc * 1.3 * density));
  ang = std::max(16, ((ang + 7) / 8) * 8);
  return polar_grid({c.real(), c.imag()}, rad, rp, 6, ang);
}

Engine build_engine_1d(const Kernel& K, const TestFunction1D& f, int max_power,
                       double density) {
  Engine eng;
  eng.max_power = max_power;
  const Domain1D dom = domain_1d(K, f);
  const Grid1D g = grid_1d(K, dom, density);
  const std::size_t M = g.size();
  std::vector<double> fv(M);
  for (std::size_t i = 0; i < M; ++i) fv[i] = f(g.x[i]);

  const ProjectionBasis* basis = K.basis();
  if (basis && basis->is_real()) {
    eng.mode = Engine::Mode::coef_r;
    const int N = basis->size();
    Mat<double> Phi(M, N), PhiT(N, M);
    std::vector<double> row(N);
    for (std::size_t i = 0; i < M; ++i) {
      basis->eval_real(g.x[i], row);
      for (int k = 0; k < N; ++k) {
        Phi(i, k) = row[k];
        PhiT(k, i) = row[k];
      }
    }
    eng.Sr.resize(max_power + 1);
    eng.diag_ints.assign(max_power + 1, 0.0);
    Mat<double> scaled(M, N);
    for (int j = 1; j <= max_power; ++j) {
      for (std::size_t i = 0; i < M; ++i) {
        const double s = g.w[i] * std::pow(fv[i], j);
        for (int k = 0; k < N; ++k) scaled(i, k) = s * Phi(i, k);
      }
      eng.Sr[j] = PhiT * scaled;
      eng.diag_ints[j] = eng.Sr[j].trace();
    }
    return eng;
  }

  require(K.is_real(), "quadrature: complex 1-d kernels not supported");
  eng.mode = Engine::Mode::node_r;
  Mat<double> Km(M, M);
  for (std::size_t i = 0; i < M; ++i) {
    Km(i, i) = K.diag({g.x[i], 0.0});
    for (std::size_t j = i + 1; j < M; ++j) {
      const double v = K.eval({g.x[i], 0.0}, {g.x[j], 0.0}).real();
      Km(i, j) = v;
      Km(j, i) = v;
    }
  }
  eng.Sr.resize(max_power + 1);
  eng.diag_ints.assign(max_power + 1, 0.0);
  for (int j = 0; j <= max_power; ++j) {
    Mat<double> T(M, M);
    for (std::size_t i = 0; i < M; ++i) {
      const double s = g.w[i] * (j ? std::pow(fv[i], j) : 1.0);
      for (std::size_t l = 0; l < M; ++l) T(i, l) = s * Km(i, l);
    }
    eng.Sr[j] = std::move(T);
    if (j >= 1) {
      double di = 0.0;
      for (std::size_t i = 0; i < M; ++i)
        di += g.w[i] * std::pow(fv[i], j) * Km(i, i);
      eng.diag_ints[j] = di;
    }
  }
  return eng;
}

Engine build_engine_2d(const Kernel& K, const TestFunction2D& f, int max_power,
                       double density) {
  Engine eng;
  eng.max_power = max_power;

  // radial statistics of radial finite kernels decouple into modes
  if (K.rank() > 0 && f.radial_about_origin()) {
    const double rad = f.support_radius();
    const double s_max = rad * rad;
    bool ok = true;
    eng.D.resize(max_power + 1);
    eng.diag_ints.assign(max_power + 1, 0.0);
    for (int j = 1; j <= max_power && ok; ++j) {
      auto gfun = [&](double s) {
        const double v = f(std::sqrt(s));
        return std::pow(v, j);
      };
      eng.D[j] = kernels::radial_mode_integrals(K, gfun, s_max, density);
      ok = !eng.D[j].empty();
      if (ok)
        eng.diag_ints[j] = std::accumulate(eng.D[j].begin(), eng.D[j].end(), 0.0);
    }
    if (ok) {
      eng.mode = Engine::Mode::diag;
      return eng;
    }
  }

  const Grid2D g = grid_2d(K, f, density);
  const std::size_t M = g.size();
  std::vector<double> fv(M);
  for (std::size_t i = 0; i < M; ++i) fv[i] = f(to_cplx(g.pts[i]));

  const ProjectionBasis* basis = K.basis();
  if (basis) {
    eng.mode = Engine::Mode::coef_c;
    const int N = basis->size();
    Mat<cplx> Phi(M, N), PhiH(N, M);
    std::vector<cplx> row(N);
    for (std::size_t i = 0; i < M; ++i) {
      basis->eval(g.pts[i], row);
      for (int k = 0; k < N; ++k) {
        Phi(i, k) = row[k];
        PhiH(k, i) = std::conj(row[k]);
      }
    }
    eng.Sc.resize(max_power + 1);
    eng.diag_ints.assign(max_power + 1, 0.0);
    Mat<cplx> scaled(M, N);
    for (int j = 1; j <= max_power; ++j) {
      for (std::size_t i = 0; i < M; ++i) {
        const double s = g.w[i] * std::pow(fv[i], j);
        for (int k = 0; k < N; ++k) scaled(i, k) = s * Phi(i, k);
      }
      eng.Sc[j] = PhiH * scaled;
      eng.diag_ints[j] = eng.Sc[j].trace().real();
    }
    return eng;
  }

  eng.mode = Engine::Mode::node_c;
  Mat<cplx> Km;
  K.fill(g.pts, Km);
  eng.Sc.resize(max_power + 1);
  eng.diag_ints.assign(max_power + 1, 0.0);
  for (int j = 0; j <= max_power; ++j) {
    Mat<cplx> T(M, M);
    for (std::size_t i = 0; i < M; ++i) {
      const double s = g.w[i] * (j ? std::pow(fv[i], j) : 1.0);
      for (std::size_t l = 0; l < M; ++l) T(i, l) = s * Km(i, l);
    }
    eng.Sc[j] = std::move(T);
    if (j >= 1) {
      double di = 0.0;
      for (std::size_t i = 0; i < M; ++i)
        di += g.w[i] * std::pow(fv[i], j) * Km(i, i).real();
      eng.diag_ints[j] = di;
    }
  }
  return eng;
}

// C^n from the length-l cyclic integrals with thinning p.
double assemble_cumulant(const Engine& eng, int n, double p) {
  double acc = 0.0;
  for (const Composition& k : combi::compositions(n)) {
    const int l = k.length();
    double w = ((l % 2) ? 1.0 : -1.0) / l;  // -(-1)^l / l
    w *= static_cast<double>(combi::multinomial(k));
    w *= std::pow(p, l);
    acc += w * eng.cycle(k.parts);
  }
  return acc;
}

double upsilon_cycles(const Engine& eng, int n, int m) {
  double acc = 0.0;
  for (const Composition& k : combi::compositions(n)) {
    const double w =
        static_cast<double>(combi::upsilon(UpsilonMap::indexed(m), k));
    if (w == 0.0) continue;
    std::vector<int> powers(k.parts.begin(), k.parts.end());
    powers.resize(n, 0);  // identity padding up to the full cycle length
    acc += w * eng.cycle(powers);
  }
  return acc;
}

template <class BuildFn>
QuadResult quad_with_audit(const BuildFn& build, int order, double p,
                           const QuadOptions& opt) {
  require(order >= 1 && order <= 3, "quadrature engine: order <= 3");
  require(p > 0.0 && p <= 1.0, "quadrature engine: retention in (0,1]");
  const Engine fine = build(1.6 * opt.density);
  const double v1 = assemble_cumulant(fine, order, p);
  QuadResult r;
  r.value = v1;
  if (opt.audit) {
    const Engine coarse = build(opt.density);
    r.error = std::abs(v1 - assemble_cumulant(coarse, order, p));
    if (r.error > opt.tol * std::max(std::abs(v1), 1e-10))
      throw numeric_error("quadrature cumulant: refinement disagreement " +
                          std::to_string(r.error));
  }
  return r;
}

template <class BuildFn>
Decomposition decompose(const BuildFn& build, int order, double q,
                        const QuadOptions& opt) {
  require(order >= 1 && order <= 3, "decomposition: order <= 3");
  require(q >= 0.0 && q < 1.0, "decomposition: q in [0,1)");
  const Engine eng = build(1.6 * opt.density);
  Decomposition d;
  d.base = assemble_cumulant(eng, order, 1.0);
  d.direct = assemble_cumulant(eng, order, 1.0 - q);
  d.ups_by_m.assign(order + 1, 0.0);
  double diag_term = 0.0, ups_term = 0.0, mq = 1.0;
  for (int m = 1; m <= order; ++m) {
    mq *= -q;  // (-q)^m
    const double gam = static_cast<double>(combi::gamma_coeff(order, m));
    diag_term -= mq * gam * eng.diag_ints[order];
    const double um = upsilon_cycles(eng, order, m);
    d.ups_by_m[m] = um;
    ups_term -= mq * um;
  }
  d.diag_term = diag_term;
  d.ups_term = ups_term;
  return d;
}

}  // namespace

QuadResult quadrature_cumulant(const Kernel& K, const TestFunction1D& f,
                               int order, double p, const QuadOptions& opt) {
  return quad_with_audit(
      [&](double dens) { return build_engine_1d(K, f, order, dens); }, order, p,
      opt);
}

QuadResult quadrature_cumulant(const Kernel& K, const TestFunction2D& f,
                               int order, double p, const QuadOptions& opt) {
  return quad_with_audit(
      [&](double dens) { return build_engine_2d(K, f, order, dens); }, order, p,
      opt);
}

Decomposition thinned_decomposition(const Kernel& K, const TestFunction1D& f,
                                    int order, double q, const QuadOptions& opt) {
  return decompose(
      [&](double dens) { return build_engine_1d(K, f, order, dens); }, order, q,
      opt);
}

Decomposition thinned_decomposition(const Kernel& K, const TestFunction2D& f,
                                    int order, double q, const QuadOptions& opt) {
  return decompose(
      [&](double dens) { return build_engine_2d(K, f, order, dens); }, order, q,
      opt);
}

}  // namespace dpplab::cumulants
