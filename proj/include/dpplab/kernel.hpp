#pragma once

#include <memory>
#include <string>

#include "dpplab/core/common.hpp"
#include "dpplab/core/matrix.hpp"

namespace dpplab {

// Orthonormal family phi_0..phi_{N-1} spanning the range of a rank-N
// projection kernel.  The sampler and the coefficient-space cumulant engine
// both consume this.
class ProjectionBasis {
 public:
  virtual ~ProjectionBasis() = default;
  virtual int dimension() const = 0;
  virtual int size() const = 0;
  virtual bool is_real() const = 0;
  virtual void eval(Point z, std::span<cplx> out) const = 0;
  // 1-d real bases can avoid the complex detour.
  virtual void eval_real(double x, std::span<double> out) const;
  // Radius beyond which the diagonal of the induced kernel is negligible.
  virtual double extent() const = 0;
};

// An evaluable correlation kernel with metadata.  Hermitian by construction:
// eval(z,w) == conj(eval(w,z)).
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual int dimension() const = 0;
  virtual int rank() const = 0;  // 0 means infinite rank
  virtual std::string family() const = 0;
  virtual cplx eval(Point z, Point w) const = 0;
  virtual double diag(Point z) const { return eval(z, z).real(); }
  virtual bool is_real() const { return false; }
  virtual const ProjectionBasis* basis() const { return nullptr; }
  // Effective support radius of the diagonal (inf for translation-invariant
  // kernels; quadrature domains then come from the test function).
  virtual double extent() const = 0;

  // Dense kernel matrix on a point set; overridden where a faster fill exists.
  virtual void fill(std::span<const Point> pts, Mat<cplx>& out) const;
};

using KernelHandle = std::shared_ptr<const Kernel>;

}  // namespace dpplab
