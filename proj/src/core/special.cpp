#include "dpplab/core/special.hpp"

#include <cmath>
#include <limits>

namespace dpplab {
namespace {

// Series representation, valid for x < a+1.
double gser(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q, valid for x >= a+1.
double gcf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  return (x < a + 1.0) ? gser(a, x) : 1.0 - gcf(a, x);
}

double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  return (x < a + 1.0) ? 1.0 - gser(a, x) : gcf(a, x);
}

double chi2_sf(double x, int k) { return gamma_q(0.5 * k, 0.5 * x); }

double kolmogorov_sf(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    s += (j % 2 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * s));
}

}  // namespace dpplab
