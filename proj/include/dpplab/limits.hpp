#pragma once

#include <vector>

#include "dpplab/combi.hpp"
#include "dpplab/kernels.hpp"
#include "dpplab/orthopoly.hpp"
#include "dpplab/testfunction.hpp"

// Closed-form and semi-analytic evaluation of the limiting objects the
// convergence experiments compare against: Gaussian-noise variances, Poisson
// cumulants, crossover cumulants, the planar loop integral, the sine-kernel
// main term and the integrated-density change of variables.

namespace dpplab::limits {

// \int |df|^2 dA (Wirtinger derivative); dilation- and translation-invariant.
double h1_variance(const TestFunction2D& f);

// c_k(f) = (2/pi) \int_{-1}^{1} f T_k / sqrt(1-x^2), by Gauss-Chebyshev.
double chebyshev_coeff(const TestFunction1D& f, int k, int nodes = 256);

// (1/4) sum_k k c_k(f)^2, truncated at deg f for polynomials.
double chebyshev_variance(const TestFunction1D& f);

// \int_0^infty u |fhat(u)|^2 du.
double h_half_variance(const TestFunction1D& f);

struct Intensity1D {
  double constant = 0.0;
  const orthopoly::EquilibriumMeasure1D* eq = nullptr;
  static Intensity1D lebesgue(double c = 1.0) { return {c, nullptr}; }
  static Intensity1D equilibrium(const orthopoly::EquilibriumMeasure1D& e) {
    return {0.0, &e};
  }
};

struct Intensity2D {
  double constant = 0.0;
  const kernels::EquilibriumMeasure2D* eq = nullptr;
  static Intensity2D lebesgue(double c = 1.0) { return {c, nullptr}; }
  static Intensity2D equilibrium(const kernels::EquilibriumMeasure2D& e) {
    return {0.0, &e};
  }
};

// Cumulants of the mean-zero Poisson process: 0 at n = 1, \int f^n eta dmu
// for n >= 2.
double poisson_cumulant(const TestFunction1D& f, const Intensity1D& eta, int n);
double poisson_cumulant(const TestFunction2D& f, const Intensity2D& eta, int n);

enum class Setting { macro2d, meso2d, macro1d, meso1d };

// Limit of the n-th thinned cumulant in the critical regime: the Gaussian
// variance at n = 2 plus tau (-1)^n times the Poisson integral with the
// setting's intensity (equilibrium macroscopically, Lebesgue mesoscopically).
double crossover_cumulant(const TestFunction2D& f, int n, double tau, Setting s,
                          const kernels::EquilibriumMeasure2D* eq = nullptr);
double crossover_cumulant(const TestFunction1D& f, int n, double tau, Setting s,
                          const orthopoly::EquilibriumMeasure1D* eq = nullptr);

// --- planar loop integral ---------------------------------------------------

// Polynomial of total degree <= 2 in w_1..w_n and their conjugates.
struct LoopMonomial {
  cplx coeff;
  std::vector<int> wexp;     // exponent of w_i
  std::vector<int> wbarexp;  // exponent of conj(w_i)
};

struct LoopPoly {
  int n = 2;
  std::vector<LoopMonomial> terms;
  LoopPoly& add(cplx c, std::vector<int> we, std::vector<int> wbe);
};

// Closed form sum_{1<=r<=s<=n} d_s dbar_r H at w = 0; independent of the
// kernel density.
double ginibre_loop_closed_form(const LoopPoly& H);

// Direct tensor quadrature of the loop integral (n = 2 only); several
// polynomials evaluated against one kernel sweep.
std::vector<double> ginibre_loop_quadrature(const std::vector<LoopPoly>& Hs,
                                            double rho);
double ginibre_loop_quadrature(const LoopPoly& H, double rho);

// --- sine-kernel main term ----------------------------------------------------

struct HyperplaneResult {
  double value = 0.0;
  double achieved_tol = 0.0;
  long evals = 0;
};

// The hyperplane integral over u_1+...+u_n = 0 of Re{prod fhat(u_j)} times
// the Upsilon-weighted checkpoint maxima; the overall sign is fixed so that
// the base map at n = 2 reproduces the sine-kernel variance (positive).
HyperplaneResult sine_main_term(const TestFunction1D& f, int n,
                                const combi::UpsilonMap& Y,
                                long budget = 4000000);

// --- integrated density of states ---------------------------------------------

// zeta_N(x) = N^alpha ( G(F(x0) + rho(x0) x / N^alpha) - x0 ).
double ids_zeta(const orthopoly::EquilibriumMeasure1D& eq, double x0,
                double alpha, double Ngas, double x);

}  // namespace dpplab::limits
