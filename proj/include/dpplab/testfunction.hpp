#pragma once

#include <limits>
#include <memory>
#include <string>

#include "dpplab/core/common.hpp"
#include "dpplab/core/poly.hpp"

// Linear-statistic test functions.  1-d functions expose a Fourier transform
// (convention fhat(u) = \int f(x) e^{-2 pi i x u} dx) where available; 2-d
// functions expose the Wirtinger derivative for the H^1 energy.

namespace dpplab {

class TestFunction1D {
 public:
  virtual ~TestFunction1D() = default;
  virtual double operator()(double x) const = 0;
  virtual bool has_fourier() const { return false; }
  virtual cplx fourier(double) const {
    throw numeric_error("fourier transform not available for " + name());
  }
  // radius around center() beyond which f is negligible (inf for polynomials)
  virtual double support_radius() const = 0;
  virtual double center() const { return 0.0; }
  virtual std::string name() const = 0;
};

class Poly1D final : public TestFunction1D {
 public:
  explicit Poly1D(Poly p) : p_(std::move(p)) {}
  double operator()(double x) const override { return p_(x); }
  double support_radius() const override {
    return std::numeric_limits<double>::infinity();
  }
  std::string name() const override { return "poly(" + p_.to_string() + ")"; }
  const Poly& poly() const { return p_; }

 private:
  Poly p_;
};

// f(x) = exp(-pi ((x-a)/sigma)^2); fhat(u) = sigma e^{-pi sigma^2 u^2} e^{-2pi i a u}
class Gaussian1D final : public TestFunction1D {
 public:
  Gaussian1D(double a, double sigma) : a_(a), sigma_(sigma) {
    require(sigma > 0.0, "gaussian bump: width > 0");
  }
  double operator()(double x) const override;
  bool has_fourier() const override { return true; }
  cplx fourier(double u) const override;
  double support_radius() const override { return 3.8 * sigma_; }
  double center() const override { return a_; }
  std::string name() const override { return "gauss1d"; }
  double width() const { return sigma_; }

 private:
  double a_, sigma_;
};

// f(x) = (1 - ((x-a)/w)^2)^4 on [a-w, a+w]; three continuous derivatives.
class Bump1D final : public TestFunction1D {
 public:
  Bump1D(double a, double w) : a_(a), w_(w) { require(w > 0.0, "bump: width > 0"); }
  double operator()(double x) const override;
  bool has_fourier() const override { return true; }
  cplx fourier(double u) const override;  // oscillation-resolved panel quadrature
  double support_radius() const override { return w_; }
  double center() const override { return a_; }
  std::string name() const override { return "bump1d"; }

 private:
  double a_, w_;
};

// f(L (x - x0)); the mesoscopic rescaling.
class Rescaled1D final : public TestFunction1D {
 public:
  Rescaled1D(std::shared_ptr<const TestFunction1D> f, double L, double x0)
      : f_(std::move(f)), L_(L), x0_(x0) {
    require(L > 0.0, "rescaled: L > 0");
  }
  double operator()(double x) const override { return (*f_)(L_ * (x - x0_)); }
  bool has_fourier() const override { return f_->has_fourier(); }
  cplx fourier(double u) const override;
  double support_radius() const override { return f_->support_radius() / L_; }
  double center() const override { return x0_ + f_->center() / L_; }
  std::string name() const override { return f_->name() + "@scaled"; }

 private:
  std::shared_ptr<const TestFunction1D> f_;
  double L_, x0_;
};

class TestFunction2D {
 public:
  virtual ~TestFunction2D() = default;
  virtual double operator()(cplx z) const = 0;
  virtual cplx d(cplx z) const = 0;  // (f_x - i f_y)/2
  virtual double support_radius() const = 0;
  virtual cplx center() const { return 0.0; }
  virtual bool radial_about_origin() const { return false; }
  virtual std::string name() const = 0;
};

class Gaussian2D final : public TestFunction2D {
 public:
  Gaussian2D(cplx c, double sigma) : c_(c), sigma_(sigma) {
    require(sigma > 0.0, "gaussian bump: width > 0");
  }
  double operator()(cplx z) const override;
  cplx d(cplx z) const override;
  double support_radius() const override { return 4.8 * sigma_; }
  cplx center() const override { return c_; }
  bool radial_about_origin() const override { return c_ == cplx{0.0, 0.0}; }
  std::string name() const override { return "gauss2d"; }

 private:
  cplx c_;
  double sigma_;
};

class Bump2D final : public TestFunction2D {
 public:
  Bump2D(cplx c, double R) : c_(c), R_(R) { require(R > 0.0, "bump: radius > 0"); }
  double operator()(cplx z) const override;
  cplx d(cplx z) const override;
  double support_radius() const override { return R_; }
  cplx center() const override { return c_; }
  bool radial_about_origin() const override { return c_ == cplx{0.0, 0.0}; }
  std::string name() const override { return "bump2d"; }

 private:
  cplx c_;
  double R_;
};

// f(z) = |z|^{2m} (1 - |z|^2/S)^4 on |z|^2 <= S; a polynomial statistic
// smoothly truncated to the bulk.
class RadialMonomialBump2D final : public TestFunction2D {
 public:
  RadialMonomialBump2D(int m, double S) : m_(m), S_(S) {
    require(m >= 0 && S > 0.0, "radial monomial bump: m >= 0, S > 0");
  }
  double operator()(cplx z) const override;
  cplx d(cplx z) const override;
  double support_radius() const override { return std::sqrt(S_); }
  bool radial_about_origin() const override { return true; }
  std::string name() const override { return "radialbump2d"; }

 private:
  int m_;
  double S_;
};

class Rescaled2D final : public TestFunction2D {
 public:
  Rescaled2D(std::shared_ptr<const TestFunction2D> f, double L, cplx x0)
      : f_(std::move(f)), L_(L), x0_(x0) {
    require(L > 0.0, "rescaled: L > 0");
  }
  double operator()(cplx z) const override { return (*f_)(L_ * (z - x0_)); }
  cplx d(cplx z) const override { return L_ * f_->d(L_ * (z - x0_)); }
  double support_radius() const override { return f_->support_radius() / L_; }
  cplx center() const override { return x0_ + f_->center() / L_; }
  bool radial_about_origin() const override {
    return x0_ == cplx{0.0, 0.0} && f_->radial_about_origin();
  }
  std::string name() const override { return f_->name() + "@scaled"; }

 private:
  std::shared_ptr<const TestFunction2D> f_;
  double L_;
  cplx x0_;
};

}  // namespace dpplab
