#include "dpplab/testfunction.hpp"

#include <cmath>
#include <numbers>

#include "dpplab/core/quadrature.hpp"

namespace dpplab {

using std::numbers::pi;

double Gaussian1D::operator()(double x) const {
  const double t = (x - a_) / sigma_;
  return std::exp(-pi * t * t);
}

cplx Gaussian1D::fourier(double u) const {
  const double mag = sigma_ * std::exp(-pi * sigma_ * sigma_ * u * u);
  const double ph = -2.0 * pi * a_ * u;
  return mag * cplx{std::cos(ph), std::sin(ph)};
}

double Bump1D::operator()(double x) const {
  const double t = (x - a_) / w_;
  const double s = 1.0 - t * t;
  if (s <= 0.0) return 0.0;
  const double s2 = s * s;
  return s2 * s2;
}

cplx Bump1D::fourier(double u) const {
  // panels sized to the oscillation 1/(4|u|) keep the rule spectral
  const double osc = std::abs(u) * 2.0 * w_;
  const int panels = std::max(8, static_cast<int>(std::ceil(4.0 * osc)) + 4);
  const Grid1D g = gl_panels(a_ - w_, a_ + w_, panels, 8);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double ph = -2.0 * pi * g.x[i] * u;
    acc += g.w[i] * (*this)(g.x[i]) * cplx{std::cos(ph), std::sin(ph)};
  }
  return acc;
}

cplx Rescaled1D::fourier(double u) const {
  const double ph = -2.0 * pi * x0_ * u;
  return f_->fourier(u / L_) / L_ * cplx{std::cos(ph), std::sin(ph)};
}

double Gaussian2D::operator()(cplx z) const {
  return std::exp(-std::norm(z - c_) / (sigma_ * sigma_));
}

cplx Gaussian2D::d(cplx z) const {
  return -std::conj(z - c_) / (sigma_ * sigma_) * (*this)(z);
}

double Bump2D::operator()(cplx z) const {
  const double s = 1.0 - std::norm(z - c_) / (R_ * R_);
  if (s <= 0.0) return 0.0;
  const double s2 = s * s;
  return s2 * s2;
}

cplx Bump2D::d(cplx z) const {
  const double s = 1.0 - std::norm(z - c_) / (R_ * R_);
  if (s <= 0.0) return 0.0;
  return -4.0 * s * s * s / (R_ * R_) * std::conj(z - c_);
}

double RadialMonomialBump2D::operator()(cplx z) const {
  const double s = std::norm(z);
  const double t = 1.0 - s / S_;
  if (t <= 0.0) return 0.0;
  const double t2 = t * t;
  return std::pow(s, m_) * t2 * t2;
}

cplx RadialMonomialBump2D::d(cplx z) const {
  const double s = std::norm(z);
  const double t = 1.0 - s / S_;
  if (t <= 0.0) return 0.0;
  const double t2 = t * t;
  const double fs = (m_ > 0 ? m_ * std::pow(s, m_ - 1) * t2 * t2 : 0.0) -
                    std::pow(s, m_) * 4.0 * t * t2 / S_;
  return fs * std::conj(z);
}

}  // namespace dpplab
