#include <cmath>
#include <cstring>

#include "dpplab/simd/simd.hpp"

namespace dpplab::simd::detail {
namespace {

void vexp_s(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

double dot_s(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double wdot_s(const double* w, const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

// i-k-j order keeps the B row hot; good enough as a reference kernel.
void matmul_d_s(const double* A, const double* B, double* C,
                std::size_t m, std::size_t k, std::size_t n) {
  std::memset(C, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* Ai = A + i * k;
    double* Ci = C + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double a = Ai[kk];
      if (a == 0.0) continue;
      const double* Bk = B + kk * n;
      for (std::size_t j = 0; j < n; ++j) Ci[j] += a * Bk[j];
    }
  }
}

void matmul_z_s(const std::complex<double>* A, const std::complex<double>* B,
                std::complex<double>* C, std::size_t m, std::size_t k,
                std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) C[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::complex<double>* Ai = A + i * k;
    std::complex<double>* Ci = C + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const std::complex<double> a = Ai[kk];
      const std::complex<double>* Bk = B + kk * n;
      for (std::size_t j = 0; j < n; ++j) Ci[j] += a * Bk[j];
    }
  }
}

void cd_cross_row_s(double a, double pN_y, double pNm1_y, const double* pN,
                    const double* pNm1, const double* x, double y,
                    double tie_eps, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double d = y - x[j];
    if (std::abs(d) <= tie_eps) continue;
    out[j] = a * (pN_y * pNm1[j] - pN[j] * pNm1_y) / d;
  }
}

}  // namespace

const Ops scalar_ops = {vexp_s, dot_s, wdot_s, matmul_d_s, matmul_z_s,
                        cd_cross_row_s};

}  // namespace dpplab::simd::detail
