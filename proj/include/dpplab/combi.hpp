#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <vector>

#include "dpplab/core/common.hpp"

// Exact combinatorial calculus over integer compositions: multinomials, the
// gamma coefficients of the thinning expansion, the Upsilon maps and their
// normalization identities.  Everything here is exact rational arithmetic;
// floating point appears only at the boundary to the numeric modules.

namespace dpplab::combi {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Supported order range.  Enumeration is 2^(n-1), so this is a hard cap.
inline constexpr int kMaxOrder = 12;

// Ordered tuple of positive integers summing to n.
struct Composition {
  std::vector<int> parts;
  int n = 0;

  int length() const { return static_cast<int>(parts.size()); }
};

// All compositions of n in lexicographic order; exactly 2^(n-1) of them.
std::vector<Composition> compositions(int n);

// n! / (k_1! ... k_l!)
BigInt multinomial(const Composition& k);

// Weight map over compositions: either the base map (kind 0) or the
// m-indexed family appearing in the q-expansion of thinned cumulants.
struct UpsilonMap {
  enum class Kind { base, indexed };
  Kind kind = Kind::base;
  int m = 0;  // only for Kind::indexed, m >= 1

  static UpsilonMap base_map() { return {Kind::base, 0}; }
  static UpsilonMap indexed(int m) {
    require(m >= 1, "indexed upsilon map needs m >= 1");
    return {Kind::indexed, m};
  }
};

// gamma^n_m = sum over k |- n of ((-1)^l / l) C(l,m) M(k), exact.
Rational gamma_coeff(int n, int m);

Rational upsilon(const UpsilonMap& map, const Composition& k);

// sum over k |- n of Y(k) * prod_{j<=l(k)} f(x[j-1])^{k_j}; x.size() == n.
double upsilon_apply(const UpsilonMap& map, const std::function<double(double)>& f,
                     const std::vector<double>& x);
// Same with precomputed values f(x_1..x_n).
double upsilon_apply_values(const UpsilonMap& map, const std::vector<double>& fx);

// The double composition sum that collapses mesoscopic cumulants: equals 1
// for n = 2 and 0 otherwise.
Rational rv_sum(int n);

// C(l, m) as exact integer with the convention C(l,m)=0 for m > l.
BigInt binomial(int l, int m);

}  // namespace dpplab::combi
