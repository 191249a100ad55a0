#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dpplab/core/common.hpp"

namespace dpplab {

// Dense univariate polynomial, coeffs[j] multiplies x^j.
struct Poly {
  std::vector<double> coeffs;

  Poly() = default;
  explicit Poly(std::vector<double> c) : coeffs(std::move(c)) { trim(); }
  static Poly monomial(int k, double c = 1.0) {
    std::vector<double> v(k + 1, 0.0);
    v[k] = c;
    return Poly(std::move(v));
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double operator()(double x) const {
    double r = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) r = r * x + coeffs[i];
    return r;
  }

  double deriv(double x) const {
    double r = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) r = r * x + coeffs[i] * static_cast<double>(i);
    return r;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0.0) continue;
      if (!s.empty()) s += "+";
      s += std::to_string(coeffs[i]) + "x^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

 private:
  void trim() {
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  }
};

}  // namespace dpplab
