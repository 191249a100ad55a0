#pragma once

#include <functional>
#include <vector>

#include "dpplab/core/common.hpp"

namespace dpplab {

struct Grid1D {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
    return s;
  }
};

// Nodes/weights of the n-point Gauss-Legendre rule on [-1,1].
Grid1D gauss_legendre(int n);
// Same rule mapped to [a,b].
Grid1D gauss_legendre(int n, double a, double b);
// Composite rule: `panels` equal panels on [a,b], `n` nodes each.
Grid1D gl_panels(double a, double b, int panels, int n);

// Tensor polar grid carrying weights for the area measure dA = dx dy / pi.
struct Grid2D {
  std::vector<Point> pts;
  std::vector<double> w;
  std::size_t size() const { return pts.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) s += w[i] * f(pts[i]);
    return s;
  }
};

// Disk around `center` of radius rmax: Gauss-Legendre panels radially,
// uniform (trapezoidal) angular nodes.
Grid2D polar_grid(Point center, double rmax, int radial_panels, int radial_nodes,
                  int angular);
// Annulus rmin < r < rmax.
Grid2D polar_annulus(Point center, double rmin, double rmax, int radial_panels,
                     int radial_nodes, int angular);

}  // namespace dpplab
