#include "dpplab/kernel.hpp"

namespace dpplab {

void ProjectionBasis::eval_real(double, std::span<double>) const {
  throw numeric_error("eval_real: basis is not real-valued");
}

void Kernel::fill(std::span<const Point> pts, Mat<cplx>& out) const {
  const std::size_t m = pts.size();
  out = Mat<cplx>(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    out(i, i) = diag(pts[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      const cplx v = eval(pts[i], pts[j]);
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
}

}  // namespace dpplab
