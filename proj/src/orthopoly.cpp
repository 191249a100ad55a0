#include "dpplab/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "dpplab/core/quadrature.hpp"
#include "dpplab/simd/simd.hpp"

namespace dpplab::orthopoly {
namespace {

// 2NV at the cutoff; e^{-700} is comfortably inside the normal double range.
constexpr double kWeightLogCut = 700.0;

double bisect_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Potential1D Potential1D::quadratic() { return {Kind::quadratic, {1.0}}; }

Potential1D Potential1D::quartic(double t) {
  require(t >= 0.0, "quartic potential needs t >= 0");
  return {Kind::quartic, {1.0, t}};
}

Potential1D Potential1D::custom_even(std::vector<double> c) {
  require(!c.empty(), "custom potential needs coefficients");
  bool positive = false;
  for (double v : c) {
    require(v >= 0.0, "custom potential coefficients must be >= 0 (convexity)");
    positive = positive || v > 0.0;
  }
  require(positive && c.back() > 0.0, "custom potential must grow");
  return {Kind::custom_even, std::move(c)};
}

double Potential1D::operator()(double x) const {
  const double s = x * x;
  double r = 0.0;
  for (std::size_t j = c_.size(); j-- > 0;) r = r * s + c_[j];
  return r * s;
}

double Potential1D::deriv(double x) const {
  const double s = x * x;
  double r = 0.0;
  for (std::size_t j = c_.size(); j-- > 0;) r = r * s + (2.0 * (j + 1)) * c_[j];
  return r * x;
}

std::string Potential1D::name() const {
  switch (kind_) {
    case Kind::quadratic: return "quadratic";
    case Kind::quartic: return "quartic(t=" + std::to_string(c_[1]) + ")";
    default: return "custom-even";
  }
}

double Potential1D::weight_cutoff(int N) const {
  require(N >= 1, "weight_cutoff: N >= 1");
  double hi = 2.0;
  while (2.0 * N * (*this)(hi) < kWeightLogCut) hi *= 2.0;
  return bisect_increasing([&](double x) { return 2.0 * N * (*this)(x); },
                           kWeightLogCut, 0.0, hi);
}

bool Potential1D::growth_ok(double nu) const {
  for (double lx = 1.0; lx < 19.0; lx += 0.5) {
    const double x = std::exp(lx);
    if ((*this)(x) < (1.0 + nu) * lx) return false;
  }
  return true;
}

bool JacobiMatrix::valid() const {
  if (size < 2 || static_cast<int>(b.size()) != size ||
      static_cast<int>(a.size()) != size - 1)
    return false;
  for (double v : a)
    if (!(v > 0.0) || !std::isfinite(v)) return false;
  for (double v : b)
    if (!std::isfinite(v)) return false;
  return true;
}

JacobiMatrix hermite_recurrence(int N, int size) {
  require(N >= 1 && size >= N, "hermite_recurrence: size >= N >= 1");
  JacobiMatrix J;
  J.N = N;
  J.size = size;
  J.b.assign(size, 0.0);
  J.a.resize(size - 1);
  for (int k = 0; k + 1 < size; ++k) J.a[k] = std::sqrt((k + 1) / (4.0 * N));
  J.log_m0 = 0.5 * std::log(std::numbers::pi / (2.0 * N));
  return J;
}

namespace {

JacobiMatrix stieltjes_once(const Potential1D& V, int N, int size, int npp,
                            double density) {
  const double R = V.weight_cutoff(N);
  const long target_nodes =
      std::lround(std::max(2000.0, 24.0 * size) * density);
  const int panels = std::max<int>(32, static_cast<int>(target_nodes / npp));
  const Grid1D g = gl_panels(-R, R, panels, npp);
  const std::size_t M = g.size();

  std::vector<double> loge(M), wt(M), sq(M);
  for (std::size_t i = 0; i < M; ++i) loge[i] = -2.0 * N * V(g.x[i]);
  simd::vexp(loge.data(), wt.data(), M);
  double m0 = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    wt[i] *= g.w[i];
    m0 += wt[i];
  }
  require(m0 > 0.0 && std::isfinite(m0), "stieltjes: weight mass not finite");
  for (std::size_t i = 0; i < M; ++i) sq[i] = std::sqrt(std::max(0.0, wt[i]));

  JacobiMatrix J;
  J.N = N;
  J.size = size;
  J.b.assign(size, 0.0);
  J.a.assign(size - 1, 0.0);
  J.log_m0 = std::log(m0);

  // q_k(x_i) = P_k(x_i) sqrt(weight_i); inner products become plain dots.
  std::vector<double> qprev(M, 0.0), qcur(M), r(M), hist;
  hist.reserve(static_cast<std::size_t>(size) * M);
  const double inv = 1.0 / std::sqrt(m0);
  for (std::size_t i = 0; i < M; ++i) qcur[i] = sq[i] * inv;
  hist.insert(hist.end(), qcur.begin(), qcur.end());

  for (int k = 0; k < size; ++k) {
    const double bk = simd::wdot(g.x.data(), qcur.data(), qcur.data(), M);
    J.b[k] = bk;
    if (k == size - 1) break;
    const double am = (k == 0) ? 0.0 : J.a[k - 1];
    for (std::size_t i = 0; i < M; ++i)
      r[i] = (g.x[i] - bk) * qcur[i] - am * qprev[i];
    // one full reorthogonalization pass keeps the discrete Lanczos clean
    for (int j = 0; j <= k; ++j) {
      const double* qj = hist.data() + static_cast<std::size_t>(j) * M;
      const double c = simd::dot(qj, r.data(), M);
      for (std::size_t i = 0; i < M; ++i) r[i] -= c * qj[i];
    }
    const double ak = std::sqrt(simd::dot(r.data(), r.data(), M));
    if (!(ak > 1e-150) || !std::isfinite(ak))
      throw numeric_error("stieltjes: grid cannot resolve index " + std::to_string(k));
    J.a[k] = ak;
    qprev.swap(qcur);
    for (std::size_t i = 0; i < M; ++i) qcur[i] = r[i] / ak;
    hist.insert(hist.end(), qcur.begin(), qcur.end());
  }
  return J;
}

}  // namespace

JacobiMatrix stieltjes_coeffs(const Potential1D& V, int N, int size,
                              const StieltjesOptions& opt) {
  require(N >= 1 && size >= 2, "stieltjes_coeffs: N >= 1, size >= 2");
  JacobiMatrix fine = stieltjes_once(V, N, size, opt.nodes_per_panel, 2.0 * opt.density);
  if (opt.audit) {
    const JacobiMatrix coarse =
        stieltjes_once(V, N, size, opt.nodes_per_panel, opt.density);
    double gap = 0.0;
    for (int k = 0; k < size - 1; ++k)
      gap = std::max({gap, std::abs(fine.a[k] - coarse.a[k]),
                      std::abs(fine.b[k] - coarse.b[k])});
    if (gap > opt.audit_tol)
      throw numeric_error("stieltjes: coefficients unstable under grid doubling, gap=" +
                          std::to_string(gap));
  }
  return fine;
}

namespace {

// Forward recurrence on phi with a shared binary exponent per point.
struct ScaledPair {
  double pm = 0.0, pc = 0.0;  // phi_{k-1}, phi_k (scaled)
  int e2 = 0;

  void renorm() {
    const double m = std::max(std::abs(pm), std::abs(pc));
    if (m > 0x1p+400 || (m > 0.0 && m < 0x1p-400)) {
      int sh;
      std::frexp(m, &sh);
      pm = std::ldexp(pm, -sh);
      pc = std::ldexp(pc, -sh);
      e2 += sh;
    }
  }
  double value() const { return std::ldexp(pc, e2); }
};

ScaledPair phi_start(const JacobiMatrix& J, const Potential1D& V, double x) {
  ScaledPair s;
  const double lg = (-J.N * V(x) - 0.5 * J.log_m0) / std::numbers::ln2;
  s.e2 = static_cast<int>(std::floor(lg));
  s.pc = std::exp2(lg - s.e2);
  s.pm = 0.0;
  return s;
}

}  // namespace

void phi_functions(const JacobiMatrix& J, const Potential1D& V, double x,
                   std::span<double> out) {
  const int K = static_cast<int>(out.size());
  require(K <= J.size, "phi_functions: need recurrence coefficients up to K");
  ScaledPair s = phi_start(J, V, x);
  for (int k = 0; k < K; ++k) {
    out[k] = s.value();
    if (k + 1 >= K) break;
    const double next = ((x - J.b[k]) * s.pc - (k ? J.a[k - 1] : 0.0) * s.pm) / J.a[k];
    s.pm = s.pc;
    s.pc = next;
    s.renorm();
  }
}

void phi_functions_deriv(const JacobiMatrix& J, const Potential1D& V, double x,
                         std::span<double> phi, std::span<double> dphi) {
  const int K = static_cast<int>(phi.size());
  require(dphi.size() == phi.size(), "phi_functions_deriv: size mismatch");
  require(K <= J.size, "phi_functions_deriv: need coefficients up to K");
  ScaledPair s = phi_start(J, V, x);
  // phi_0' = -N V'(x) phi_0 shares the scale of phi_0
  double dm = 0.0, dc = -J.N * V.deriv(x) * s.pc;
  for (int k = 0; k < K; ++k) {
    phi[k] = s.value();
    dphi[k] = std::ldexp(dc, s.e2);
    if (k + 1 >= K) break;
    const double am = k ? J.a[k - 1] : 0.0;
    const double next = ((x - J.b[k]) * s.pc - am * s.pm) / J.a[k];
    // product rule on the recurrence, same shared exponent
    const double dnext = ((x - J.b[k]) * dc + s.pc - am * dm) / J.a[k];
    s.pm = s.pc;
    s.pc = next;
    dm = dc;
    dc = dnext;
    const int before = s.e2;
    s.renorm();
    if (s.e2 != before) {
      dm = std::ldexp(dm, before - s.e2);
      dc = std::ldexp(dc, before - s.e2);
    }
  }
}

Mat<double> phi_matrix(const JacobiMatrix& J, const Potential1D& V,
                       std::span<const double> xs, int cols) {
  Mat<double> out(xs.size(), cols);
  std::vector<double> row(cols);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    phi_functions(J, V, xs[i], row);
    std::copy(row.begin(), row.end(), out.data() + i * cols);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Christoffel-Darboux kernel

namespace {

class CdBasis final : public ProjectionBasis {
 public:
  CdBasis(const JacobiMatrix* J, const Potential1D* V, double extent)
      : J_(J), V_(V), extent_(extent) {}
  int dimension() const override { return 1; }
  int size() const override { return J_->N; }
  bool is_real() const override { return true; }
  void eval(Point z, std::span<cplx> out) const override {
    std::vector<double> tmp(out.size());
    phi_functions(*J_, *V_, z.x, tmp);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = tmp[i];
  }
  void eval_real(double x, std::span<double> out) const override {
    phi_functions(*J_, *V_, x, out);
  }
  double extent() const override { return extent_; }

 private:
  const JacobiMatrix* J_;
  const Potential1D* V_;
  double extent_;
};

}  // namespace

CdKernel::CdKernel(JacobiMatrix J, Potential1D V) : J_(std::move(J)), V_(std::move(V)) {
  require(J_.valid(), "cd_kernel: invalid Jacobi matrix");
  require(J_.size >= J_.N + 1, "cd_kernel: need coefficients through index N");
  const double cut = V_.weight_cutoff(J_.N);
  double x = 0.0;
  const double step = std::max(0.01, cut / 400.0);
  while (x < cut && diag1d(x) > J_.N * 1e-13) x += step;
  extent_ = std::min(cut, x + 2 * step);
  basis_ = std::make_unique<CdBasis>(&J_, &V_, extent_);
}

double CdKernel::eval1d(double x, double y) const {
  const int N = J_.N;
  if (std::abs(x - y) <= kTieEps) {
    const double m = 0.5 * (x + y);
    return diag1d(m);
  }
  double px[2], py[2];
  {
    std::vector<double> tmp(N + 1);
    phi_functions(J_, V_, x, tmp);
    px[0] = tmp[N - 1];
    px[1] = tmp[N];
    phi_functions(J_, V_, y, tmp);
    py[0] = tmp[N - 1];
    py[1] = tmp[N];
  }
  return J_.a[N - 1] * (px[1] * py[0] - py[1] * px[0]) / (x - y);
}

double CdKernel::diag1d(double x) const {
  const int N = J_.N;
  std::vector<double> p(N + 1), dp(N + 1);
  phi_functions_deriv(J_, V_, x, p, dp);
  return J_.a[N - 1] * (dp[N] * p[N - 1] - dp[N - 1] * p[N]);
}

Mat<double> CdKernel::matrix(std::span<const double> xs) const {
  const int N = J_.N;
  const std::size_t M = xs.size();
  std::vector<double> pN(M), pNm1(M), dN(M), dNm1(M);
  {
    std::vector<double> p(N + 1), dp(N + 1);
    for (std::size_t i = 0; i < M; ++i) {
      phi_functions_deriv(J_, V_, xs[i], p, dp);
      pNm1[i] = p[N - 1];
      pN[i] = p[N];
      dNm1[i] = dp[N - 1];
      dN[i] = dp[N];
    }
  }
  const double a = J_.a[N - 1];
  Mat<double> K(M, M);
  for (std::size_t j = 0; j < M; ++j)
    simd::cd_cross_row(a, pN[j], pNm1[j], pN.data(), pNm1.data(), xs.data(),
                       xs[j], kTieEps, K.data() + j * M, M);
  // confluent entries (in practice the diagonal; grids keep nodes separated)
  for (std::size_t j = 0; j < M; ++j)
    for (std::size_t i = 0; i < M; ++i)
      if (std::abs(xs[j] - xs[i]) <= kTieEps) {
        const double vN = 0.5 * (dN[i] + dN[j]);
        const double vNm1 = 0.5 * (dNm1[i] + dNm1[j]);
        K(j, i) = a * (vN * 0.5 * (pNm1[i] + pNm1[j]) -
                       vNm1 * 0.5 * (pN[i] + pN[j]));
      }
  return K;
}

void CdKernel::fill(std::span<const Point> pts, Mat<cplx>& out) const {
  std::vector<double> xs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) xs[i] = pts[i].x;
  const Mat<double> K = matrix(xs);
  out = Mat<cplx>(K.rows, K.cols);
  for (std::size_t i = 0; i < K.a.size(); ++i) out.a[i] = K.a[i];
}

KernelHandle cd_kernel(const JacobiMatrix& J, const Potential1D& V) {
  return std::make_shared<CdKernel>(J, V);
}

// ---------------------------------------------------------------------------
// Equilibrium measure

double EquilibriumMeasure1D::density(double x) const {
  if (closed_form) {
    const double s = 1.0 - x * x;
    return s > 0.0 ? 2.0 / std::numbers::pi * std::sqrt(s) : 0.0;
  }
  if (x <= grid.front() || x >= grid.back()) return 0.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t j = it - grid.begin();
  const double t = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return (1.0 - t) * dens[j - 1] + t * dens[j];
}

double EquilibriumMeasure1D::F(double x) const {
  if (closed_form) {
    const double xc = std::clamp(x, -1.0, 1.0);
    return (xc * std::sqrt(1.0 - xc * xc) + std::asin(xc)) / std::numbers::pi;
  }
  if (x <= grid.front()) return cdf.front();
  if (x >= grid.back()) return cdf.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t j = it - grid.begin();
  const double t = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return (1.0 - t) * cdf[j - 1] + t * cdf[j];
}

double EquilibriumMeasure1D::G(double y) const {
  require(y > F(left) && y < F(right), "G: argument outside the bulk image");
  double lo = left, hi = right;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (right - left); ++it) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double EquilibriumMeasure1D::mass() const {
  // x = c + r sin(theta) regularizes the square-root edge behavior
  const double c = 0.5 * (left + right), r = 0.5 * (right - left);
  const Grid1D g = gl_panels(-std::numbers::pi / 2, std::numbers::pi / 2, 60, 8);
  return g.integrate([&](double th) {
    return density(c + r * std::sin(th)) * r * std::cos(th);
  });
}

EquilibriumMeasure1D equilibrium_1d(const Potential1D& V) {
  EquilibriumMeasure1D eq;
  if (V.kind() == Potential1D::Kind::quadratic) {
    eq.closed_form = true;
    eq.left = -1.0;
    eq.right = 1.0;
    return eq;
  }
  // Operational definition: one-point density extrapolated over two gas sizes.
  const int N1 = 100, N2 = 200;
  const JacobiMatrix J1 = stieltjes_coeffs(V, N1, N1 + 8);
  const JacobiMatrix J2 = stieltjes_coeffs(V, N2, N2 + 8);
  const CdKernel K1(J1, V), K2(J2, V);
  const double B = std::max(K1.extent(), K2.extent());
  const int M = 1601;
  eq.grid.resize(M);
  eq.dens.resize(M);
  std::vector<double> u1(M), u2(M);
  for (int i = 0; i < M; ++i) {
    const double x = -B + 2.0 * B * i / (M - 1);
    eq.grid[i] = x;
    u1[i] = K1.diag1d(x) / N1;
    u2[i] = K2.diag1d(x) / N2;
  }
  // Richardson on the integrated density (integration damps the finite-N
  // oscillation), then differentiate back.
  std::vector<double> F1(M, 0.0), F2(M, 0.0);
  for (int i = 1; i < M; ++i) {
    const double h = eq.grid[i] - eq.grid[i - 1];
    F1[i] = F1[i - 1] + 0.5 * h * (u1[i] + u1[i - 1]);
    F2[i] = F2[i - 1] + 0.5 * h * (u2[i] + u2[i - 1]);
  }
  std::vector<double> Fx(M);
  for (int i = 0; i < M; ++i) Fx[i] = 2.0 * F2[i] - F1[i];
  for (int i = 1; i < M; ++i) Fx[i] = std::max(Fx[i], Fx[i - 1]);  // monotone
  const double total = Fx.back();
  if (std::abs(total - 1.0) > 1e-3)
    throw numeric_error("equilibrium_1d: density mass off by " +
                        std::to_string(total - 1.0));
  for (int i = 0; i < M; ++i) Fx[i] /= total;
  for (int i = 0; i < M; ++i) {
    const int a = std::max(0, i - 1), b = std::min(M - 1, i + 1);
    eq.dens[i] = std::max(0.0, (Fx[b] - Fx[a]) / (eq.grid[b] - eq.grid[a]));
  }
  // bulk endpoints: where the density clears a small threshold
  const double thr = 1e-3 * *std::max_element(eq.dens.begin(), eq.dens.end());
  int lo = 0, hi = M - 1;
  while (lo < M - 1 && eq.dens[lo] < thr) ++lo;
  while (hi > 0 && eq.dens[hi] < thr) --hi;
  eq.left = eq.grid[lo];
  eq.right = eq.grid[hi];
  // store F relative to 0 as the integrated density of states
  eq.cdf.resize(M);
  const double F0 = Fx[(M - 1) / 2];
  for (int i = 0; i < M; ++i) eq.cdf[i] = Fx[i] - F0;
  return eq;
}

double density_moment(const Kernel& K, int k) {
  require(K.dimension() == 1 && K.rank() > 0, "density_moment: finite 1-d kernel");
  require(k >= 0 && k <= 12, "density_moment: k <= 12");
  const double B = K.extent();
  const int panels = std::max(200, 12 * K.rank());
  const Grid1D g = gl_panels(-B, B, panels, 8);
  const double s = g.integrate([&](double x) {
    return std::pow(x, k) * K.diag({x, 0.0});
  });
  return s / K.rank();
}

double right_limit_gap(const JacobiMatrix& J, int window) {
  require(J.size >= J.N + window + 2, "right_limit_gap: need N + window coefficients");
  double gap = 0.0;
  for (int j = -window; j <= window; ++j)
    gap = std::max(gap, std::abs(J.a[J.N + j] - J.a[J.N]));
  return gap;
}

}  // namespace dpplab::orthopoly
