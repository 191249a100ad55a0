#include "dpplab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dpplab/core/special.hpp"
#include "dpplab/kernels.hpp"
#include "dpplab/orthopoly.hpp"

namespace dpplab::sampler {
namespace {

class PiecewiseConstant1D final : public Proposal {
 public:
  PiecewiseConstant1D(const Kernel& K, int cells) {
    const double B = K.extent();
    require(std::isfinite(B) && B > 0.0, "envelope: finite kernel extent needed");
    const double N = K.rank();
    require(N >= 1, "envelope: finite-rank kernel needed");
    lo_ = -B;
    hi_ = B;
    const double h = (hi_ - lo_) / cells;
    bound_.resize(cells);
    for (int c = 0; c < cells; ++c) {
      double m = 0.0;
      for (int j = 0; j <= 16; ++j)
        m = std::max(m, K.diag({lo_ + (c + j / 16.0) * h, 0.0}));
      bound_[c] = 1.05 * m / N + 1e-300;
    }
    // audit on a refined scan; raise any violated cell
    for (int c = 0; c < cells; ++c) {
      for (int j = 0; j < 64; ++j) {
        const double v = K.diag({lo_ + (c + (j + 0.5) / 64.0) * h, 0.0}) / N;
        if (v > bound_[c]) bound_[c] = 1.05 * v;
      }
    }
    cdf_.resize(cells + 1, 0.0);
    for (int c = 0; c < cells; ++c) cdf_[c + 1] = cdf_[c] + bound_[c] * h;
    total_ = cdf_[cells];
  }

  Point sample(RngStream& rng) const override {
    const double u = rng.uniform() * total_;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t c = std::min<std::size_t>(bound_.size() - 1,
                                                (it - cdf_.begin()) - 1);
    const double h = (hi_ - lo_) / bound_.size();
    const double frac = (u - cdf_[c]) / (bound_[c] * h);
    return {lo_ + (c + std::clamp(frac, 0.0, 1.0)) * h, 0.0};
  }

  double density(Point p) const override {
    if (p.x < lo_ || p.x >= hi_) return 0.0;
    const double h = (hi_ - lo_) / bound_.size();
    const std::size_t c = std::min<std::size_t>(
        bound_.size() - 1, static_cast<std::size_t>((p.x - lo_) / h));
    return bound_[c] / total_;
  }

  double margin() const override { return total_; }

 private:
  double lo_ = 0, hi_ = 0, total_ = 0;
  std::vector<double> bound_;
  std::vector<double> cdf_;
};

// K(z,z)/N is the equal-weight mixture of the |phi_k|^2 laws.  For the
// quadratic potential |z|^2 under |phi_k|^2 is Gamma(k+1, 2N) with a uniform
// angle, which samples the mixture exactly (margin 1).
class RadialMixture2D final : public Proposal {
 public:
  explicit RadialMixture2D(const Kernel& K) : K_(&K), N_(K.rank()) {
    require(N_ >= 1 && K.dimension() == 2, "mixture proposal: finite 2-d kernel");
    require(K.family().find("finite-ginibre") != std::string::npos,
            "mixture proposal: exact radial law implemented for the quadratic potential");
  }

  Point sample(RngStream& rng) const override {
    const int k = std::min<int>(N_ - 1, static_cast<int>(rng.uniform() * N_));
    const double s = rng.gamma(k + 1.0, 2.0 * N_);
    const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(s);
    return {r * std::cos(th), r * std::sin(th)};
  }

  double density(Point p) const override { return K_->diag(p) / N_; }
  double margin() const override { return 1.0; }

 private:
  const Kernel* K_;
  int N_;
};

}  // namespace

std::unique_ptr<Proposal> envelope_proposal_1d(const Kernel& K, int cells) {
  return std::make_unique<PiecewiseConstant1D>(K, cells);
}

std::unique_ptr<Proposal> mixture_proposal_2d(const Kernel& K) {
  return std::make_unique<RadialMixture2D>(K);
}

namespace {

PointConfig hkpv_core(const ProjectionBasis& basis, const std::vector<int>& keep,
                      const Proposal& prop, RngStream& rng,
                      const HkpvOptions& opt, const std::string& model) {
  const int D = basis.size();
  const int n = static_cast<int>(keep.size());
  PointConfig cfg;
  cfg.dimension = basis.dimension();
  cfg.model = model;
  cfg.N = n;
  cfg.seed = rng.seed();
  cfg.replica = rng.replica();
  if (n == 0) return cfg;

  std::vector<cplx> full(D), v(n);
  std::vector<std::vector<cplx>> ortho;  // orthonormal rows in kept coordinates
  ortho.reserve(n);

  for (int j = 0; j < n; ++j) {
    const double remaining = n - j;
    bool accepted = false;
    for (long trial = 0; trial < opt.proposal_budget; ++trial) {
      const Point x = prop.sample(rng);
      const double q = prop.density(x);
      if (q <= 0.0) continue;
      basis.eval(x, full);
      double norm2 = 0.0;
      for (int i = 0; i < n; ++i) {
        v[i] = full[keep[i]];
        norm2 += std::norm(v[i]);
      }
      double proj = 0.0;
      for (std::size_t e = 0; e < ortho.size(); ++e) {
        cplx c = 0.0;
        for (int i = 0; i < n; ++i) c += std::conj(ortho[e][i]) * v[i];
        proj += std::norm(c);
      }
      const double pj = std::max(0.0, norm2 - proj) / remaining;
      const double alpha = pj * remaining / (D * prop.margin() * q);
      if (alpha > 1.0 + 1e-6)
        throw numeric_error("hkpv: envelope violated (ratio " +
                            std::to_string(alpha) + ")");
      if (rng.uniform() >= alpha) continue;
      // Gram-Schmidt, twice for orthogonality at machine precision
      std::vector<cplx> e(v);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t s = 0; s < ortho.size(); ++s) {
          cplx c = 0.0;
          for (int i = 0; i < n; ++i) c += std::conj(ortho[s][i]) * e[i];
          for (int i = 0; i < n; ++i) e[i] -= c * ortho[s][i];
        }
      }
      double en = 0.0;
      for (int i = 0; i < n; ++i) en += std::norm(e[i]);
      en = std::sqrt(en);
      if (en < 1e-12) continue;  // numerically degenerate direction, resample
      for (int i = 0; i < n; ++i) e[i] /= en;
      ortho.push_back(std::move(e));
      cfg.pts.push_back(x);
      accepted = true;
      break;
    }
    if (!accepted)
      throw numeric_error("hkpv: proposal budget exhausted at point " +
                          std::to_string(j) + " of " + std::to_string(n));
  }
  return cfg;
}

}  // namespace

PointConfig hkpv_sample(const ProjectionBasis& basis, const Proposal& prop,
                        RngStream& rng, const HkpvOptions& opt) {
  std::vector<int> keep(basis.size());
  std::iota(keep.begin(), keep.end(), 0);
  return hkpv_core(basis, keep, prop, rng, opt, "projection");
}

PointConfig hkpv_sample_subset(const ProjectionBasis& basis,
                               const std::vector<int>& keep,
                               const Proposal& prop, RngStream& rng,
                               const HkpvOptions& opt) {
  for (int k : keep) require(k >= 0 && k < basis.size(), "subset: bad mode index");
  return hkpv_core(basis, keep, prop, rng, opt, "sub-projection");
}

PointConfig bernoulli_thin(const PointConfig& cfg, double p, RngStream& rng) {
  require(p >= 0.0 && p <= 1.0, "thin: retention in [0,1]");
  PointConfig out = cfg;
  out.pts.clear();
  for (const Point& x : cfg.pts)
    if (rng.uniform() < p) out.pts.push_back(x);
  out.model = cfg.model + "+thinned";
  return out;
}

PointConfig random_projection_sample(const ProjectionBasis& basis, double p,
                                     const Proposal& prop, RngStream& rng,
                                     const HkpvOptions& opt) {
  require(p >= 0.0 && p <= 1.0, "random projection: retention in [0,1]");
  std::vector<int> keep;
  for (int k = 0; k < basis.size(); ++k)
    if (rng.uniform() < p) keep.push_back(k);
  PointConfig cfg = hkpv_core(basis, keep, prop, rng, opt, "random-projection");
  return cfg;
}

// ---------------------------------------------------------------------------
// k-statistics

namespace {

// k1..k4 from non-central power sums of n samples.
std::array<double, 5> kstats_from_sums(double n, double s1, double s2, double s3,
                                       double s4, int maxo) {
  std::array<double, 5> k{};
  const double m = s1 / n;
  const double M2 = s2 - s1 * s1 / n;
  const double M3 = s3 - 3.0 * s2 * s1 / n + 2.0 * s1 * s1 * s1 / (n * n);
  const double M4 = s4 - 4.0 * s3 * s1 / n + 6.0 * s2 * s1 * s1 / (n * n) -
                    3.0 * s1 * s1 * s1 * s1 / (n * n * n);
  k[1] = m;
  if (maxo >= 2) k[2] = M2 / (n - 1.0);
  if (maxo >= 3) k[3] = n * M3 / ((n - 1.0) * (n - 2.0));
  if (maxo >= 4)
    k[4] = (n * (n + 1.0) * M4 - 3.0 * (n - 1.0) * M2 * M2) /
           ((n - 1.0) * (n - 2.0) * (n - 3.0));
  return k;
}

}  // namespace

KStats mc_cumulants(const std::vector<double>& samples, int max_order) {
  require(max_order >= 1 && max_order <= 4, "mc_cumulants: order <= 4");
  const long n = static_cast<long>(samples.size());
  require(n >= 1000, "mc_cumulants: at least 1000 samples required");

  // shift by a pivot: k2..k4 are translation invariant, k1 shifts back
  const double pivot = samples[0];
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (double raw : samples) {
    const double x = raw - pivot;
    const double x2 = x * x;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
  }
  KStats out;
  out.n = n;
  auto k = kstats_from_sums(n, s1, s2, s3, s4, max_order);
  k[1] += pivot;
  out.k = k;

  // jackknife over leave-one-out k-statistics
  std::array<double, 5> mean{}, mom2{};
  for (double raw : samples) {
    const double x = raw - pivot;
    const double x2 = x * x;
    auto kj = kstats_from_sums(n - 1.0, s1 - x, s2 - x2, s3 - x2 * x,
                               s4 - x2 * x2, max_order);
    for (int r = 1; r <= max_order; ++r) {
      mean[r] += kj[r];
      mom2[r] += kj[r] * kj[r];
    }
  }
  for (int r = 1; r <= max_order; ++r) {
    mean[r] /= n;
    const double var = std::max(0.0, mom2[r] / n - mean[r] * mean[r]);
    out.se[r] = std::sqrt((n - 1.0) * var);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Windows and empirical correlations

long count_in(const PointConfig& cfg, const Window& w) {
  long c = 0;
  if (cfg.dimension == 1) {
    for (const Point& p : cfg.pts)
      if (std::abs(p.x - w.center.x) <= w.radius) ++c;
  } else {
    for (const Point& p : cfg.pts)
      if (dist(p, w.center) <= w.radius) ++c;
  }
  return c;
}

MomentEstimate empirical_binomial_moment(const std::vector<PointConfig>& reps,
                                         const std::vector<Window>& windows,
                                         const combi::Composition& k) {
  require(windows.size() == k.parts.size(),
          "binomial moment: one window per composition part");
  for (std::size_t a = 0; a < windows.size(); ++a)
    for (std::size_t b = a + 1; b < windows.size(); ++b)
      require(dist(windows[a].center, windows[b].center) >
                  windows[a].radius + windows[b].radius,
              "binomial moment: windows must be disjoint");
  double s = 0, s2 = 0;
  for (const PointConfig& cfg : reps) {
    double prod = 1.0;
    for (std::size_t j = 0; j < windows.size(); ++j) {
      const long c = count_in(cfg, windows[j]);
      const int kj = k.parts[j];
      double b = 1.0;
      for (int i = 0; i < kj; ++i) b *= static_cast<double>(c - i) / (i + 1);
      prod *= std::max(0.0, b);
    }
    s += prod;
    s2 += prod * prod;
  }
  MomentEstimate est;
  est.replicas = static_cast<long>(reps.size());
  est.value = s / est.replicas;
  const double var = std::max(0.0, s2 / est.replicas - est.value * est.value);
  est.se = std::sqrt(var / est.replicas);
  return est;
}

double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "ks test: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
}

}  // namespace dpplab::sampler
