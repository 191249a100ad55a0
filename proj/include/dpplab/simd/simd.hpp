#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Data-parallel inner loops used by the kernel, quadrature and trace code.
// Every operation has a scalar reference implementation and (on x86-64) an
// AVX2 variant; the backend is chosen once at runtime.  Set DPPLAB_SIMD=scalar
// in the environment to force the reference path.

namespace dpplab::simd {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool supported(Backend b);
void set_backend(Backend b);  // test hook; throws if unsupported on this CPU
std::string backend_name();

// out[i] = exp(x[i]); inputs below -745 flush to 0, above 709 saturate.
void vexp(const double* x, double* out, std::size_t n);

double dot(const double* a, const double* b, std::size_t n);

// sum_i w[i]*a[i]*b[i]
double wdot(const double* w, const double* a, const double* b, std::size_t n);

// Row-major C = A*B with A (m x k), B (k x n), C (m x n).
void matmul(const double* A, const double* B, double* C,
            std::size_t m, std::size_t k, std::size_t n);
void matmul(const std::complex<double>* A, const std::complex<double>* B,
            std::complex<double>* C, std::size_t m, std::size_t k, std::size_t n);

// Christoffel-Darboux cross product against a row of points:
//   out[j] = a*(pN_y*pNm1[j] - pN[j]*pNm1_y)/(y - x[j])
// Entries with |y - x[j]| <= tie_eps are left untouched so the caller can
// substitute the confluent (diagonal) limit.
void cd_cross_row(double a, double pN_y, double pNm1_y,
                  const double* pN, const double* pNm1, const double* x,
                  double y, double tie_eps, double* out, std::size_t n);

namespace detail {
struct Ops {
  void (*vexp)(const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*wdot)(const double*, const double*, const double*, std::size_t);
  void (*matmul_d)(const double*, const double*, double*,
                   std::size_t, std::size_t, std::size_t);
  void (*matmul_z)(const std::complex<double>*, const std::complex<double>*,
                   std::complex<double>*, std::size_t, std::size_t, std::size_t);
  void (*cd_cross_row)(double, double, double, const double*, const double*,
                       const double*, double, double, double*, std::size_t);
};
extern const Ops scalar_ops;
#if defined(__x86_64__)
extern const Ops avx2_ops;
#endif
}  // namespace detail

}  // namespace dpplab::simd
