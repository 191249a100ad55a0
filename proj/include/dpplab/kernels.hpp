#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "dpplab/core/common.hpp"
#include "dpplab/kernel.hpp"

// Two-dimensional kernels of the radial log-gases (finite N, infinite Ginibre,
// approximate Bergman with its gauge transform), the sine kernel, and decay /
// approximation diagnostics.

namespace dpplab::kernels {

// Radially symmetric potential V(z) = sum_m c_m |z|^{2m}, c_1 > 0, c_m >= 0.
class Potential2D {
 public:
  static Potential2D quadratic();                      // V = |z|^2
  static Potential2D radial(std::vector<double> c);    // c[m-1] |z|^{2m}

  double operator()(cplx z) const { return radial_value(std::norm(z)); }
  double radial_value(double s) const;   // V as a function of s = |z|^2
  double laplacian_s(double s) const;    // Delta V = sum c_m m^2 s^{m-1}
  cplx lap_polarized(cplx u) const;      // same series at complex u = z conj(w)
  cplx phi_polarized(cplx u) const;      // polarization of V
  cplx b1_polarized(cplx u) const;       // polarization of (1/2) Delta log Delta V
  double weight_cutoff_s(int N) const;   // s where the weight e^{-2NV} underflows
  bool growth_ok(double nu) const;
  int degree() const { return static_cast<int>(c_.size()); }
  const std::vector<double>& coeffs() const { return c_; }
  std::string name() const;

 private:
  explicit Potential2D(std::vector<double> c) : c_(std::move(c)) {}
  std::vector<double> c_;
};

class EquilibriumMeasure2D {
 public:
  EquilibriumMeasure2D(Potential2D V, double radius)
      : V_(std::move(V)), radius_(radius) {}
  double radius() const { return radius_; }  // droplet radius R_V
  double density(cplx z) const;              // 2 Delta V on the droplet, else 0
  double mass() const;                       // quadrature check, should be 1
  bool in_bulk(cplx z) const;

 private:
  Potential2D V_;
  double radius_;
};

EquilibriumMeasure2D equilibrium_2d(const Potential2D& V);

// Finite-N kernel sum_{k<N} c_k^2 (z conj(w))^k e^{-N(V(z)+V(w))} with the
// normalizations c_k from radial quadrature.
KernelHandle ginibre_finite(const Potential2D& V, int N);

// Translation-invariant limit kernel rho e^{rho(2 z conj(w) - |z|^2 - |w|^2)/2}.
KernelHandle ginibre_infinite(double rho);

// sin(pi rho (x-y)) / (pi (x-y)) on the line.
KernelHandle sine_kernel(double rho);

struct BergmanData {
  cplx x0;
  std::vector<cplx> a_k0;        // Taylor data of the polarized potential at x0
  double taylor_remainder = 0.0;  // 0: polarization is an exact polynomial
  double gauge(cplx u) const;     // h(u) = -2 Im sum a_k0 u^k
};

struct BergmanApprox {
  KernelHandle kernel;
  BergmanData data;
};

// Local approximation (N b0 + b1) e^{N(2 Phi - V - V)} valid near the bulk
// point x0; rejects x0 outside the bulk.
BergmanApprox bergman_approx(const Potential2D& V, int N, cplx x0);

// Gauge-transformed Bergman kernel in local coordinates u around x0:
// B~(u,v) = B(x0+u, x0+v) e^{iN(h(u)-h(v))}.
KernelHandle gauge_rescale(const BergmanApprox& B, int N);

struct DecaySample {
  double distance;
  double absK;
  double fitted;
};

struct DecayReport {
  bool gaussian_fit = false;  // fitted in |z-w|^2 (infinite-rank kernels)
  double rate = 0.0;          // c-hat: |K| ~ C N e^{-c sqrt(N) d}, or the d^2 rate
  double rate_residual = 0.0; // rms residual of the log-linear fit
  double tail_mass = 0.0;     // max_w of \int_{|z-w|>eps_N} |K(z,w)| dmu(z)
  double eps_N = 0.0;
  double kappa = 0.0;
  double far_diag = -1.0;     // K(z,z) at |z| = 2 * tail_radius (if requested)
  std::vector<DecaySample> samples;

  bool rate_positive() const { return rate > 0.0; }
};

// Fits the off-diagonal decay over pairs with w in the disk around `center`
// of radius `srad`, and evaluates the truncated-tail mass at
// eps_N = kappa N^{-1/2} log N.  tail_radius > 0 additionally reports the
// diagonal at twice that radius.
DecayReport decay_diagnostics(const Kernel& K, Point center, double srad, int N,
                              double kappa = 4.0, double tail_radius = 0.0);

// For radial finite-rank kernels: entries \int g(|z|^2) |phi_k(z)|^2 dA for
// k < N (the monomial modes diagonalize radial weights).  Empty when the
// kernel has no such structure.
std::vector<double> radial_mode_integrals(
    const Kernel& K, const std::function<double(double)>& g, double s_max,
    double density = 1.0);

}  // namespace dpplab::kernels
