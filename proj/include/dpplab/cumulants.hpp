#pragma once

#include <string>
#include <vector>

#include "dpplab/core/poly.hpp"
#include "dpplab/kernel.hpp"
#include "dpplab/orthopoly.hpp"
#include "dpplab/testfunction.hpp"

// Three independent cumulant engines for linear statistics of the (thinned)
// determinantal process: the exact Jacobi-matrix evaluation for 1-d polynomial
// statistics, direct quadrature of the cyclic-integral expansion for orders
// n <= 3, and the thinning decomposition tying them together.

namespace dpplab::cumulants {

struct ThinningRegime {
  enum class Kind { none, critical, sub, super };
  Kind kind = Kind::none;
  double tau = 0.0;
  double s = 1.0;  // q_N = tau / N^s

  static ThinningRegime none() { return {}; }
  static ThinningRegime critical(double tau);
  static ThinningRegime sub(double tau, double s);    // s > 1, T_N -> 0
  static ThinningRegime super(double tau, double s);  // 0 < s < 1, T_N -> inf

  double q_at(int N) const;
  std::string label() const;
};

// Macroscopic deletion scale T_N = N q.
double macro_T(int N, double q);
// Mesoscopic scales: 2-d uses N q L^{-2} rho(x0); 1-d uses q N^{1-alpha} rho(x0).
double meso_T_2d(int N, double q, double L, double rho_x0);
double meso_T_1d(int N, double q, double alpha, double rho_x0);

// One row of a cumulant report; CSV columns
// (model,N,alpha,n,p,q,T_N,method,value,stderr,target,regime).
struct CumulantEntry {
  std::string model;
  int N = 0;
  double alpha = 0.0;  // 0 = macroscopic
  int order = 0;
  double p = 1.0, q = 0.0, T = 0.0;
  std::string method;  // exact | quadrature | monte-carlo
  double value = 0.0;
  double stderr_ = 0.0;  // monte-carlo only
  double target = 0.0;
  std::string regime;

  std::vector<std::string> cells() const;
  static std::vector<std::string> csv_header();
};

// --- exact engine ----------------------------------------------------------

// All cumulants C^1..C^max_order of the thinned statistic sum Q(lambda_i),
// from the trace-log form of the generating function on the Jacobi matrix.
// Requires J.size >= N + max_order*deg(Q) + 16 so the truncation margin can
// be audited by re-running 8 indices wider.
std::vector<double> exact_cumulants_1d(const orthopoly::JacobiMatrix& J,
                                       const Poly& Q, int N, int max_order,
                                       double p);
double exact_cumulant_1d(const orthopoly::JacobiMatrix& J, const Poly& Q, int N,
                         int order, double p);

// Brute-force path enumeration over the adjacency graph of Q(J); exponential,
// restricted to N <= 12, deg Q <= 2, order <= 4.  Unthinned (p = 1).
double path_cumulant_oracle(const orthopoly::JacobiMatrix& J, const Poly& Q,
                            int N, int order);

// N -> infinity limit of the unthinned cumulant, evaluated on the
// doubly-infinite tridiagonal right-limit matrix (1/2 off-diagonals) over a
// window around the boundary index; order >= 2.
double right_limit_cumulant(const Poly& Q, int order);

// --- quadrature engine ------------------------------------------------------

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // grid-refinement disagreement
};

struct QuadOptions {
  double density = 1.0;   // multiplies default node counts
  bool audit = true;      // second run on a denser grid for the error estimate
  double tol = 0.02;      // refinement disagreement above this (relative) throws
};

QuadResult quadrature_cumulant(const Kernel& K, const TestFunction1D& f,
                               int order, double p, const QuadOptions& = {});
QuadResult quadrature_cumulant(const Kernel& K, const TestFunction2D& f,
                               int order, double p, const QuadOptions& = {});

// --- thinning decomposition --------------------------------------------------

// C^n_{pK} = C^n_K - sum_m (-q)^m gamma^n_m \int f^n K(x,x)
//                  - sum_m (-q)^m \int Upsilon^n_m[f] prod K   (cyclic)
struct Decomposition {
  double base = 0.0;       // C^n at p = 1
  double diag_term = 0.0;  // gamma-weighted diagonal sum
  double ups_term = 0.0;   // Upsilon_m cyclic integrals
  double direct = 0.0;     // C^n of pK computed independently
  double sum() const { return base + diag_term + ups_term; }
  double residual() const { return sum() - direct; }
  std::vector<double> ups_by_m;  // the individual Upsilon_m integrals
};

Decomposition thinned_decomposition(const Kernel& K, const TestFunction1D& f,
                                    int order, double q, const QuadOptions& = {});
Decomposition thinned_decomposition(const Kernel& K, const TestFunction2D& f,
                                    int order, double q, const QuadOptions& = {});

}  // namespace dpplab::cumulants
