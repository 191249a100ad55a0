#pragma once

#include <span>
#include <string>
#include <vector>

#include "dpplab/core/common.hpp"
#include "dpplab/core/matrix.hpp"
#include "dpplab/core/poly.hpp"
#include "dpplab/kernel.hpp"

// Orthonormal-polynomial machinery for the weight e^{-2NV} on the line:
// recurrence coefficients, weighted functions, the finite-N
// Christoffel-Darboux kernel, one-point density and equilibrium measures.

namespace dpplab::orthopoly {

class Potential1D {
 public:
  enum class Kind { quadratic, quartic, custom_even };

  static Potential1D quadratic();                       // V(x) = x^2
  static Potential1D quartic(double t);                 // V(x) = x^2 + t x^4
  static Potential1D custom_even(std::vector<double> even_coeffs);  // sum c_j x^{2j}

  double operator()(double x) const;
  double deriv(double x) const;
  Kind kind() const { return kind_; }
  double quartic_t() const { return kind_ == Kind::quartic ? c_[1] : 0.0; }
  std::string name() const;

  // |x| where 2N V(x) reaches the underflow threshold of the weight.
  double weight_cutoff(int N) const;
  // V(x) >= (1+nu) log|x| checked on a log-spaced grid of large |x|.
  bool growth_ok(double nu) const;

 private:
  Potential1D(Kind k, std::vector<double> c) : kind_(k), c_(std::move(c)) {}
  Kind kind_;
  std::vector<double> c_;  // coefficient of x^{2j} at index j-1
};

// Recurrence coefficients of the orthonormal polynomials for e^{-2NV}:
//   x P_k = a_k P_{k+1} + b_k P_k + a_{k-1} P_{k-1}
struct JacobiMatrix {
  std::vector<double> a;  // a_0 .. a_{size-2}
  std::vector<double> b;  // b_0 .. b_{size-1}
  int N = 0;
  int size = 0;
  double log_m0 = 0.0;  // log of the weight mass, normalizes P_0

  bool valid() const;
};

// Closed form for the quadratic potential: a_k = sqrt((k+1)/(4N)), b_k = 0.
JacobiMatrix hermite_recurrence(int N, int size);

struct StieltjesOptions {
  int nodes_per_panel = 12;
  double density = 1.0;    // multiplies the default panel count
  bool audit = true;       // rerun on a doubled grid and compare
  double audit_tol = 1e-8;
};

// Discretized Stieltjes procedure (iterated orthogonalization on a
// Gauss-Legendre composite grid spanning the weight's support).
JacobiMatrix stieltjes_coeffs(const Potential1D& V, int N, int size,
                              const StieltjesOptions& opt = {});

// phi_k(x) = P_k(x) e^{-NV(x)} for k < out.size(), by forward recurrence with
// running binary scaling so neither P_k nor the weight overflows on its own.
void phi_functions(const JacobiMatrix& J, const Potential1D& V, double x,
                   std::span<double> out);
// Values and x-derivatives together.
void phi_functions_deriv(const JacobiMatrix& J, const Potential1D& V, double x,
                         std::span<double> phi, std::span<double> dphi);
// Row i = (phi_0(x_i), ..., phi_{cols-1}(x_i)).
Mat<double> phi_matrix(const JacobiMatrix& J, const Potential1D& V,
                       std::span<const double> xs, int cols);

class CdKernel;  // rank-N projection kernel built from the basis

// Christoffel-Darboux kernel of gas size J.N; requires J.size >= N+1.
KernelHandle cd_kernel(const JacobiMatrix& J, const Potential1D& V);

struct EquilibriumMeasure1D {
  double left = -1.0, right = 1.0;
  bool closed_form = false;  // semicircle

  double density(double x) const;
  double F(double x) const;  // integrated density from 0
  double G(double y) const;  // inverse of F on the bulk
  double mass() const;       // quadrature check, should be 1

  // numeric representation (empty when closed_form)
  std::vector<double> grid, dens, cdf;
};

EquilibriumMeasure1D equilibrium_1d(const Potential1D& V);

// k-th moment of the one-point density: ∫ x^k K(x,x)/N dx.
double density_moment(const Kernel& K, int k);

// max_{|j|<=window} |a_{N+j} - a_N|, the right-limit flatness indicator.
double right_limit_gap(const JacobiMatrix& J, int window = 3);

// Access to the concrete CD kernel (fast fills, basis, diagnostics).
class CdKernel final : public Kernel {
 public:
  CdKernel(JacobiMatrix J, Potential1D V);
  int dimension() const override { return 1; }
  int rank() const override { return J_.N; }
  std::string family() const override { return "cd-" + V_.name(); }
  cplx eval(Point z, Point w) const override { return eval1d(z.x, w.x); }
  double diag(Point z) const override { return diag1d(z.x); }
  bool is_real() const override { return true; }
  const ProjectionBasis* basis() const override { return basis_.get(); }
  double extent() const override { return extent_; }
  void fill(std::span<const Point> pts, Mat<cplx>& out) const override;

  double eval1d(double x, double y) const;
  double diag1d(double x) const;
  Mat<double> matrix(std::span<const double> xs) const;
  const JacobiMatrix& jacobi() const { return J_; }
  const Potential1D& potential() const { return V_; }

  static constexpr double kTieEps = 1e-6;

 private:
  JacobiMatrix J_;
  Potential1D V_;
  double extent_ = 0.0;
  std::unique_ptr<ProjectionBasis> basis_;
};

}  // namespace dpplab::orthopoly
