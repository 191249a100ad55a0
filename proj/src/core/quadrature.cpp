#include "dpplab/core/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace dpplab {

Grid1D gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n >= 1");
  Grid1D g;
  g.x.resize(n);
  g.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    g.w[n - 1 - i] = g.w[i];
  }
  return g;
}

Grid1D gauss_legendre(int n, double a, double b) {
  Grid1D base = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    base.x[i] = c + h * base.x[i];
    base.w[i] *= h;
  }
  return base;
}

Grid1D gl_panels(double a, double b, int panels, int n) {
  require(panels >= 1, "gl_panels: panels >= 1");
  const Grid1D base = gauss_legendre(n);
  Grid1D g;
  g.x.reserve(static_cast<std::size_t>(panels) * n);
  g.w.reserve(static_cast<std::size_t>(panels) * n);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int i = 0; i < n; ++i) {
      g.x.push_back(c + 0.5 * h * base.x[i]);
      g.w.push_back(0.5 * h * base.w[i]);
    }
  }
  return g;
}

Grid2D polar_annulus(Point center, double rmin, double rmax, int radial_panels,
                     int radial_nodes, int angular) {
  require(rmax > rmin && rmin >= 0.0, "polar grid: bad radii");
  require(angular >= 4, "polar grid: angular >= 4");
  const Grid1D rad = gl_panels(rmin, rmax, radial_panels, radial_nodes);
  Grid2D g;
  g.pts.reserve(rad.size() * angular);
  g.w.reserve(rad.size() * angular);
  const double dttheta = 2.0 * std::numbers::pi / angular;
  for (std::size_t i = 0; i < rad.size(); ++i) {
    const double r = rad.x[i];
    // dA = r dr dtheta / pi
    const double wr = rad.w[i] * r * dttheta / std::numbers::pi;
    for (int j = 0; j < angular; ++j) {
      const double th = j * dttheta;
      g.pts.push_back({center.x + r * std::cos(th), center.y + r * std::sin(th)});
      g.w.push_back(wr);
    }
  }
  return g;
}

Grid2D polar_grid(Point center, double rmax, int radial_panels, int radial_nodes,
                  int angular) {
  return polar_annulus(center, 0.0, rmax, radial_panels, radial_nodes, angular);
}

}  // namespace dpplab
