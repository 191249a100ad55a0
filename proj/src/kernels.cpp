#include "dpplab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "dpplab/core/quadrature.hpp"
#include "dpplab/simd/simd.hpp"

namespace dpplab::kernels {
namespace {

constexpr double kWeightLogCut = 700.0;

double bisect_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Potential2D Potential2D::quadratic() { return Potential2D({1.0}); }

Potential2D Potential2D::radial(std::vector<double> c) {
  require(!c.empty() && c[0] > 0.0, "radial potential needs c_1 > 0");
  for (double v : c) require(v >= 0.0, "radial potential coefficients must be >= 0");
  return Potential2D(std::move(c));
}

double Potential2D::radial_value(double s) const {
  double r = 0.0;
  for (std::size_t j = c_.size(); j-- > 0;) r = r * s + c_[j];
  return r * s;
}

double Potential2D::laplacian_s(double s) const {
  double r = 0.0;
  for (std::size_t j = c_.size(); j-- > 0;) {
    const double m = static_cast<double>(j + 1);
    r = r * s + c_[j] * m * m;
  }
  return r;
}

cplx Potential2D::lap_polarized(cplx u) const {
  cplx r = 0.0;
  for (std::size_t j = c_.size(); j-- > 0;) {
    const double m = static_cast<double>(j + 1);
    r = r * u + c_[j] * m * m;
  }
  return r;
}

cplx Potential2D::phi_polarized(cplx u) const {
  cplx r = 0.0;
  for (std::size_t j = c_.size(); j-- > 0;) r = r * u + c_[j];
  return r * u;
}

cplx Potential2D::b1_polarized(cplx u) const {
  // (1/2) Delta log(Delta V) for radial functions: s (log g)'' + (log g)', all
  // evaluated on the polarized argument.  g(s) = sum_j c_j (j+1)^2 s^j is the
  // Laplacian series; its s-derivatives shift the powers down.
  cplx g = 0.0, gp = 0.0, gpp = 0.0;
  for (std::size_t j = c_.size(); j-- > 0;) {
    const double m = static_cast<double>(j + 1);
    const double a = c_[j] * m * m;  // coefficient of s^j in g
    g = g * u + a;
    if (j >= 1) gp = gp * u + a * static_cast<double>(j);
    if (j >= 2) gpp = gpp * u + a * static_cast<double>(j) * (j - 1.0);
  }
  const cplx lg1 = gp / g;
  const cplx lg2 = gpp / g - lg1 * lg1;
  return 0.5 * (u * lg2 + lg1);
}

double Potential2D::weight_cutoff_s(int N) const {
  double hi = 2.0;
  while (2.0 * N * radial_value(hi) < kWeightLogCut) hi *= 2.0;
  return bisect_increasing([&](double s) { return 2.0 * N * radial_value(s); },
                           kWeightLogCut, 0.0, hi);
}

bool Potential2D::growth_ok(double nu) const {
  for (double lx = 1.0; lx < 19.0; lx += 0.5) {
    const double x = std::exp(lx);
    if (radial_value(x * x) < (1.0 + nu) * lx) return false;
  }
  return true;
}

std::string Potential2D::name() const {
  if (c_.size() == 1 && c_[0] == 1.0) return "ginibre";
  std::string s = "radial2d(";
  for (std::size_t j = 0; j < c_.size(); ++j)
    s += (j ? "," : "") + std::to_string(c_[j]);
  return s + ")";
}

// ---------------------------------------------------------------------------
// Equilibrium measure

double EquilibriumMeasure2D::density(cplx z) const {
  const double s = std::norm(z);
  if (s > radius_ * radius_) return 0.0;
  return 2.0 * V_.laplacian_s(s);
}

bool EquilibriumMeasure2D::in_bulk(cplx z) const {
  const double s = std::norm(z);
  return s < radius_ * radius_ && V_.laplacian_s(s) > 0.0;
}

double EquilibriumMeasure2D::mass() const {
  const Grid2D g = polar_grid({0.0, 0.0}, radius_, 160, 6, 16);
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) m += g.w[i] * density(to_cplx(g.pts[i]));
  return m;
}

EquilibriumMeasure2D equilibrium_2d(const Potential2D& V) {
  // mass inside radius R: 2 sum_m c_m m R^{2m}; droplet radius from mass 1
  const auto& c = V.coeffs();
  auto mass_s = [&](double s) {
    double r = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) r = r * s + 2.0 * c[j] * (j + 1.0);
    return r * s;
  };
  double hi = 1.0;
  while (mass_s(hi) < 1.0) hi *= 2.0;
  const double s_star = bisect_increasing(mass_s, 1.0, 0.0, hi);
  return EquilibriumMeasure2D(V, std::sqrt(s_star));
}

// ---------------------------------------------------------------------------
// Finite-N radial kernel

namespace {

// log of int_0^inf s^k e^{-2N Vtilde(s)} ds by peak-normalized quadrature.
double log_radial_norm2(const Potential2D& V, int N, int k, int panels) {
  auto h = [&](double s) {
    return (k > 0 ? k * std::log(s) : 0.0) - 2.0 * N * V.radial_value(s);
  };
  double s_star = 0.0, h_star = 0.0;
  if (k > 0) {
    // solve k = 2N s Vtilde'(s); the rhs is increasing in s
    const auto& c = V.coeffs();
    auto rhs = [&](double s) {
      double r = 0.0;
      for (std::size_t j = c.size(); j-- > 0;) r = r * s + c[j] * (j + 1.0);
      return 2.0 * N * s * r;
    };
    double up = 1.0;
    while (rhs(up) < k) up *= 2.0;
    s_star = bisect_increasing(rhs, k, 0.0, up);
    h_star = h(s_star);
  }
  // integration window where h - h_star >= -750
  double s_lo = 0.0;
  if (k > 0) {
    double lo = s_star * 1e-12, hi2 = s_star;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi2);
      (h(mid) - h_star < -750.0 ? lo : hi2) = mid;
    }
    s_lo = lo;
  }
  double s_hi = std::max(s_star * 2.0, 1.0);
  while (h(s_hi) - h_star > -750.0) s_hi *= 1.5;
  // resolve the saddle width sqrt(k)/(2N); the window is ~750/(2N) wide for
  // small k, so the panel count must track their ratio
  const double width = std::max(1.0, std::sqrt(static_cast<double>(k))) /
                       (2.0 * N * V.laplacian_s(0.0) + 1.0);
  const int need = static_cast<int>(
      std::ceil(3.0 * (s_hi - s_lo) / width * (panels / 240.0)));
  const Grid1D g = gl_panels(s_lo, s_hi, std::min(12000, std::max(panels, need)), 8);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    acc += g.w[i] * std::exp(h(g.x[i]) - h_star);
  return h_star + std::log(acc);
}

class MonomialBasis2D final : public ProjectionBasis {
 public:
  MonomialBasis2D(const Potential2D* V, int N, std::vector<double> logc, double extent)
      : V_(V), N_(N), logc_(std::move(logc)), extent_(extent) {
    ratio_.resize(logc_.size());
    for (std::size_t k = 0; k + 1 < logc_.size(); ++k)
      ratio_[k] = std::exp(logc_[k + 1] - logc_[k]);
  }
  int dimension() const override { return 2; }
  int size() const override { return N_; }
  bool is_real() const override { return false; }
  double extent() const override { return extent_; }

  void eval(Point p, std::span<cplx> out) const override {
    const cplx z = to_cplx(p);
    const double lg = (logc_[0] - N_ * V_->radial_value(std::norm(z))) / std::numbers::ln2;
    int e2 = static_cast<int>(std::floor(lg));
    cplx t = std::exp2(lg - e2);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = {std::ldexp(t.real(), e2), std::ldexp(t.imag(), e2)};
      if (k + 1 >= out.size()) break;
      t *= z * ratio_[k];
      const double m = std::max(std::abs(t.real()), std::abs(t.imag()));
      if (m > 0x1p+400 || (m > 0.0 && m < 0x1p-400)) {
        int sh;
        std::frexp(m, &sh);
        t = {std::ldexp(t.real(), -sh), std::ldexp(t.imag(), -sh)};
        e2 += sh;
      }
    }
  }

 private:
  const Potential2D* V_;
  int N_;
  std::vector<double> logc_;
  std::vector<double> ratio_;
  double extent_;
};

class GinibreFinite final : public Kernel {
 public:
  GinibreFinite(Potential2D V, int N) : V_(std::move(V)), N_(N) {
    require(N >= 1, "ginibre_finite: N >= 1");
    logc_.resize(N);
    std::vector<double> check(N);
    for (int k = 0; k < N; ++k) {
      logc_[k] = -0.5 * log_radial_norm2(V_, N_, k, 240);
      check[k] = -0.5 * log_radial_norm2(V_, N_, k, 480);
    }
    double jitter = 0.0;
    for (int k = 0; k < N; ++k)
      jitter = std::max(jitter, std::abs(logc_[k] - check[k]));
    if (jitter > 1e-8)
      throw numeric_error("ginibre_finite: normalization unstable under grid refinement");
    logc_ = std::move(check);

    const double R = equilibrium_2d(V_).radius();
    const double rmax = std::sqrt(V_.weight_cutoff_s(N_));
    double r = R;
    while (r < rmax && diag_at(r * r) > N_ * 1e-13) r += 0.02 * R;
    extent_ = std::min(rmax, r + 0.04 * R);
    basis_ = std::make_unique<MonomialBasis2D>(&V_, N_, logc_, extent_);
  }

  int dimension() const override { return 2; }
  int rank() const override { return N_; }
  std::string family() const override { return "finite-" + V_.name(); }
  double extent() const override { return extent_; }
  const ProjectionBasis* basis() const override { return basis_.get(); }

  cplx eval(Point zp, Point wp) const override {
    const cplx z = to_cplx(zp), w = to_cplx(wp);
    const cplx u = z * std::conj(w);
    const double base = -N_ * (V_.radial_value(std::norm(z)) + V_.radial_value(std::norm(w)));
    const double au = std::abs(u);
    if (au == 0.0) return std::exp(2.0 * logc_[0] + base);
    const double L = std::log(au), th = std::arg(u);
    double emax = -1e300;
    for (int k = 0; k < N_; ++k) emax = std::max(emax, 2.0 * logc_[k] + k * L);
    emax += base;
    if (emax < -745.0) return 0.0;
    cplx acc = 0.0;
    for (int k = 0; k < N_; ++k) {
      const double e = 2.0 * logc_[k] + k * L + base - emax;
      if (e < -45.0) continue;
      acc += std::exp(e) * cplx{std::cos(k * th), std::sin(k * th)};
    }
    return std::exp(emax) * acc;
  }

  double diag(Point zp) const override { return diag_at(std::norm(to_cplx(zp))); }

  void fill(std::span<const Point> pts, Mat<cplx>& out) const override {
    const std::size_t M = pts.size();
    Mat<cplx> Phi(M, N_), PhiH(N_, M);
    std::vector<cplx> row(N_);
    for (std::size_t i = 0; i < M; ++i) {
      basis_->eval(pts[i], row);
      for (int k = 0; k < N_; ++k) {
        Phi(i, k) = row[k];
        PhiH(k, i) = std::conj(row[k]);
      }
    }
    out = Phi * PhiH;
  }

  // \int g(s) |phi_k|^2 dA as 1-d radial quadratures; each |phi_k|^2 is a
  // probability density in s, so plain exponentials suffice.
  std::vector<double> mode_integrals(const std::function<double(double)>& g,
                                     double s_max, double density) const {
    const double s_hi = std::min(s_max, V_.weight_cutoff_s(N_));
    const int panels = std::max(240, static_cast<int>(420 * density));
    const Grid1D gr = gl_panels(0.0, s_hi, panels, 6);
    const std::size_t M = gr.size();
    std::vector<double> ls(M), vt(M), gv(M), ex(M), arg(M);
    for (std::size_t i = 0; i < M; ++i) {
      ls[i] = std::log(gr.x[i]);
      vt[i] = -2.0 * N_ * V_.radial_value(gr.x[i]);
      gv[i] = g(gr.x[i]) * gr.w[i];
    }
    std::vector<double> out(N_);
    for (int k = 0; k < N_; ++k) {
      for (std::size_t i = 0; i < M; ++i)
        arg[i] = 2.0 * logc_[k] + k * ls[i] + vt[i];
      simd::vexp(arg.data(), ex.data(), M);
      out[k] = simd::dot(gv.data(), ex.data(), M);
    }
    return out;
  }

 private:
  double diag_at(double s) const {
    const double base = -2.0 * N_ * V_.radial_value(s);
    if (s == 0.0) return std::exp(2.0 * logc_[0] + base);
    const double L = std::log(s);
    double emax = -1e300;
    for (int k = 0; k < N_; ++k) emax = std::max(emax, 2.0 * logc_[k] + k * L);
    emax += base;
    if (emax < -745.0) return 0.0;
    double acc = 0.0;
    for (int k = 0; k < N_; ++k) {
      const double e = 2.0 * logc_[k] + k * L + base - emax;
      if (e > -45.0) acc += std::exp(e);
    }
    return std::exp(emax) * acc;
  }

  Potential2D V_;
  int N_;
  std::vector<double> logc_;
  double extent_ = 0.0;
  std::unique_ptr<MonomialBasis2D> basis_;
};

class GinibreInfinite final : public Kernel {
 public:
  explicit GinibreInfinite(double rho) : rho_(rho) {
    require(rho > 0.0, "ginibre_infinite: rho > 0");
  }
  int dimension() const override { return 2; }
  int rank() const override { return 0; }
  std::string family() const override { return "ginibre-infinite"; }
  double extent() const override { return std::numeric_limits<double>::infinity(); }
  cplx eval(Point zp, Point wp) const override {
    const cplx z = to_cplx(zp), w = to_cplx(wp);
    const double re = -0.5 * rho_ * std::norm(z - w);
    const double im = rho_ * (z * std::conj(w)).imag();
    return rho_ * std::exp(re) * cplx{std::cos(im), std::sin(im)};
  }
  double diag(Point) const override { return rho_; }

 private:
  double rho_;
};

class Sine final : public Kernel {
 public:
  explicit Sine(double rho) : rho_(rho) { require(rho > 0.0, "sine_kernel: rho > 0"); }
  int dimension() const override { return 1; }
  int rank() const override { return 0; }
  bool is_real() const override { return true; }
  std::string family() const override { return "sine"; }
  double extent() const override { return std::numeric_limits<double>::infinity(); }
  cplx eval(Point z, Point w) const override {
    const double a = std::numbers::pi * rho_ * (z.x - w.x);
    if (std::abs(a) < 1e-6) return rho_ * (1.0 - a * a / 6.0);
    return std::sin(a) / (std::numbers::pi * (z.x - w.x));
  }
  double diag(Point) const override { return rho_; }

 private:
  double rho_;
};

class Bergman final : public Kernel {
 public:
  Bergman(Potential2D V, int N, double extent)
      : V_(std::move(V)), N_(N), extent_(extent) {}
  int dimension() const override { return 2; }
  int rank() const override { return N_; }
  std::string family() const override { return "bergman-" + V_.name(); }
  double extent() const override { return extent_; }
  cplx eval(Point zp, Point wp) const override {
    const cplx z = to_cplx(zp), w = to_cplx(wp);
    const cplx u = z * std::conj(w);
    const cplx amp = 2.0 * static_cast<double>(N_) * V_.lap_polarized(u) + V_.b1_polarized(u);
    const cplx e = static_cast<double>(N_) *
                   (2.0 * V_.phi_polarized(u) - V_.radial_value(std::norm(z)) -
                    V_.radial_value(std::norm(w)));
    return amp * std::exp(e);
  }

 private:
  Potential2D V_;
  int N_;
  double extent_;
};

class Gauged final : public Kernel {
 public:
  Gauged(KernelHandle B, BergmanData data, int N)
      : B_(std::move(B)), data_(std::move(data)), N_(N) {}
  int dimension() const override { return 2; }
  int rank() const override { return N_; }
  std::string family() const override { return "gauged-" + B_->family(); }
  double extent() const override { return B_->extent(); }
  cplx eval(Point up, Point vp) const override {
    const cplx u = to_cplx(up), v = to_cplx(vp);
    const cplx z = data_.x0 + u, w = data_.x0 + v;
    const double ph = N_ * (data_.gauge(u) - data_.gauge(v));
    return B_->eval(to_point(z), to_point(w)) * cplx{std::cos(ph), std::sin(ph)};
  }

 private:
  KernelHandle B_;
  BergmanData data_;
  int N_;
};

}  // namespace

KernelHandle ginibre_finite(const Potential2D& V, int N) {
  return std::make_shared<GinibreFinite>(V, N);
}

KernelHandle ginibre_infinite(double rho) {
  return std::make_shared<GinibreInfinite>(rho);
}

KernelHandle sine_kernel(double rho) { return std::make_shared<Sine>(rho); }

double BergmanData::gauge(cplx u) const {
  cplx acc = 0.0, up = 1.0;
  for (const cplx& a : a_k0) {
    up *= u;
    acc += a * up;
  }
  return -2.0 * acc.imag();
}

BergmanApprox bergman_approx(const Potential2D& V, int N, cplx x0) {
  const EquilibriumMeasure2D eq = equilibrium_2d(V);
  require(eq.in_bulk(x0), "bergman_approx: base point outside the bulk");
  BergmanApprox out;
  const double dist_to_edge = eq.radius() - std::abs(x0);
  out.kernel = std::make_shared<Bergman>(V, N, std::abs(x0) + dist_to_edge);
  out.data.x0 = x0;
  // Taylor data of the polarized potential in its first slot; exact for
  // polynomial potentials, so the reported remainder is zero.
  const auto& c = V.coeffs();
  const int deg = static_cast<int>(c.size());
  out.data.a_k0.assign(deg, 0.0);
  for (int k = 1; k <= deg; ++k) {
    cplx acc = 0.0;
    for (int m = k; m <= deg; ++m) {
      double binom = 1.0;
      for (int j = 1; j <= k; ++j) binom = binom * (m - k + j) / j;
      acc += c[m - 1] * binom * std::pow(x0, m - k) * std::pow(std::conj(x0), m);
    }
    out.data.a_k0[k - 1] = acc;
  }
  out.data.taylor_remainder = 0.0;
  return out;
}

KernelHandle gauge_rescale(const BergmanApprox& B, int N) {
  return std::make_shared<Gauged>(B.kernel, B.data, N);
}

std::vector<double> radial_mode_integrals(const Kernel& K,
                                          const std::function<double(double)>& g,
                                          double s_max, double density) {
  const auto* gf = dynamic_cast<const GinibreFinite*>(&K);
  if (!gf) return {};
  return gf->mode_integrals(g, s_max, density);
}

// ---------------------------------------------------------------------------
// Decay diagnostics

DecayReport decay_diagnostics(const Kernel& K, Point center, double srad, int N,
                              double kappa, double tail_radius) {
  require(N >= 2, "decay_diagnostics: N >= 2");
  DecayReport rep;
  rep.kappa = kappa;
  rep.eps_N = kappa * std::log(static_cast<double>(N)) / std::sqrt(static_cast<double>(N));
  rep.gaussian_fit = (K.rank() == 0);

  const int dim = K.dimension();
  std::vector<Point> bases;
  if (dim == 1) {
    for (double t : {-0.6, -0.2, 0.0, 0.3, 0.7})
      bases.push_back({center.x + t * srad, 0.0});
  } else {
    bases.push_back(center);
    for (double th : {0.0, 2.1, 4.2})
      bases.push_back({center.x + 0.5 * srad * std::cos(th),
                       center.y + 0.5 * srad * std::sin(th)});
  }

  double scale0 = 0.0;
  for (const Point& w : bases) scale0 = std::max(scale0, K.diag(w));

  // sample pair distances on the kernel's own correlation scale
  const double dstep = 1.0 / (3.0 * std::sqrt(std::max(scale0, 1.0)));
  std::vector<double> xs, ys;  // abscissa (sqrt(N)d or d^2) and log|K|
  for (const Point& w : bases) {
    std::vector<Point> dirs;
    if (dim == 1) {
      dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
      for (double th : {0.0, 1.57, 3.14, 4.71})
        dirs.push_back({std::cos(th), std::sin(th)});
    }
    for (const Point& dir : dirs) {
      for (int j = 1; j <= 48; ++j) {
        const double d = j * dstep;
        const Point z{w.x + d * dir.x, w.y + d * dir.y};
        const double a = std::abs(K.eval(z, w));
        if (a < scale0 * 1e-13) break;
        const double absc = rep.gaussian_fit ? d * d : std::sqrt(static_cast<double>(N)) * d;
        xs.push_back(absc);
        ys.push_back(std::log(a));
        rep.samples.push_back({d, a, 0.0});
      }
    }
  }
  require(xs.size() >= 8, "decay_diagnostics: too few usable pairs");

  // least squares y = alpha - rate * x
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double alpha = (sy - slope * sx) / n;
  rep.rate = -slope;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fit = alpha + slope * xs[i];
    rss += (ys[i] - fit) * (ys[i] - fit);
    rep.samples[i].fitted = std::exp(fit);
  }
  rep.rate_residual = std::sqrt(rss / n);
  if (!(rep.rate > 0.0))
    rep.tail_mass = -1.0;  // flagged; caller inspects rate_positive()

  // truncation mass beyond eps_N, maximized over a few base points
  double tmass = 0.0;
  const double W = 3.0 * std::max(srad, rep.eps_N);
  for (std::size_t bi = 0; bi < bases.size(); bi += 2) {
    const Point w = bases[bi];
    double m = 0.0;
    if (dim == 1) {
      for (double side : {-1.0, 1.0}) {
        const double a0 = w.x + side * rep.eps_N;
        const double a1 = w.x + side * (rep.eps_N + W);
        const Grid1D g = gl_panels(std::min(a0, a1), std::max(a0, a1), 120, 6);
        m += g.integrate([&](double x) { return std::abs(K.eval({x, 0.0}, w)); });
      }
    } else {
      const Grid2D g = polar_annulus(w, rep.eps_N, rep.eps_N + W, 100, 6, 48);
      for (std::size_t i = 0; i < g.size(); ++i)
        m += g.w[i] * std::abs(K.eval(g.pts[i], w));
    }
    tmass = std::max(tmass, m);
  }
  rep.tail_mass = tmass;

  if (tail_radius > 0.0) rep.far_diag = K.diag({2.0 * tail_radius, 0.0});
  return rep;
}

}  // namespace dpplab::kernels
