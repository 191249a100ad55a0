// AVX2 variants of the hot kernels.  This translation unit is the only one
// compiled with -mavx2 -mfma; it must not be entered unless the dispatcher
// verified CPU support.
#if defined(__x86_64__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "dpplab/simd/simd.hpp"

namespace dpplab::simd::detail {
namespace {

// Cephes-style expm range reduction; inputs that would leave the normal
// double range are clamped (saturate above, flush to zero below -708.39).
inline __m256d exp4(__m256d x) {
  const __m256d flush = _mm256_cmp_pd(x, _mm256_set1_pd(-708.39), _CMP_LT_OQ);
  __m256d xx = _mm256_min_pd(x, _mm256_set1_pd(709.43));
  xx = _mm256_max_pd(xx, _mm256_set1_pd(-708.39));

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(xx, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), xx);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);

  const __m256d r2 = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.00000000000000000005e0));
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  __m128i ni = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(ni);
  n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(n64));
  return _mm256_andnot_pd(flush, e);
}

void vexp_a(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_a(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double wdot_a(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), t, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

// C += A*B over a k-strip, 4x8 register tile.
void gemm_tile4x8(const double* A, const double* B, double* C, std::size_t lda,
                  std::size_t ldb, std::size_t ldc, std::size_t kb) {
  __m256d c00 = _mm256_loadu_pd(C), c01 = _mm256_loadu_pd(C + 4);
  __m256d c10 = _mm256_loadu_pd(C + ldc), c11 = _mm256_loadu_pd(C + ldc + 4);
  __m256d c20 = _mm256_loadu_pd(C + 2 * ldc), c21 = _mm256_loadu_pd(C + 2 * ldc + 4);
  __m256d c30 = _mm256_loadu_pd(C + 3 * ldc), c31 = _mm256_loadu_pd(C + 3 * ldc + 4);
  for (std::size_t kk = 0; kk < kb; ++kk) {
    const double* Bk = B + kk * ldb;
    const __m256d b0 = _mm256_loadu_pd(Bk);
    const __m256d b1 = _mm256_loadu_pd(Bk + 4);
    __m256d a;
    a = _mm256_broadcast_sd(A + kk);
    c00 = _mm256_fmadd_pd(a, b0, c00);
    c01 = _mm256_fmadd_pd(a, b1, c01);
    a = _mm256_broadcast_sd(A + lda + kk);
    c10 = _mm256_fmadd_pd(a, b0, c10);
    c11 = _mm256_fmadd_pd(a, b1, c11);
    a = _mm256_broadcast_sd(A + 2 * lda + kk);
    c20 = _mm256_fmadd_pd(a, b0, c20);
    c21 = _mm256_fmadd_pd(a, b1, c21);
    a = _mm256_broadcast_sd(A + 3 * lda + kk);
    c30 = _mm256_fmadd_pd(a, b0, c30);
    c31 = _mm256_fmadd_pd(a, b1, c31);
  }
  _mm256_storeu_pd(C, c00);
  _mm256_storeu_pd(C + 4, c01);
  _mm256_storeu_pd(C + ldc, c10);
  _mm256_storeu_pd(C + ldc + 4, c11);
  _mm256_storeu_pd(C + 2 * ldc, c20);
  _mm256_storeu_pd(C + 2 * ldc + 4, c21);
  _mm256_storeu_pd(C + 3 * ldc, c30);
  _mm256_storeu_pd(C + 3 * ldc + 4, c31);
}

// C += A*B (row-major, no zeroing).
void gemm_acc(const double* A, const double* B, double* C, std::size_t m,
              std::size_t k, std::size_t n) {
  constexpr std::size_t KC = 256;
  for (std::size_t k0 = 0; k0 < k; k0 += KC) {
    const std::size_t kb = std::min(KC, k - k0);
    const std::size_t m4 = m - m % 4;
    const std::size_t n8 = n - n % 8;
    for (std::size_t i = 0; i < m4; i += 4)
      for (std::size_t j = 0; j < n8; j += 8)
        gemm_tile4x8(A + i * k + k0, B + k0 * n + j, C + i * n + j, k, n, n, kb);
    // leftover columns for the tiled rows
    if (n8 < n) {
      for (std::size_t i = 0; i < m4; ++i) {
        double* Ci = C + i * n;
        const double* Ai = A + i * k + k0;
        for (std::size_t kk = 0; kk < kb; ++kk) {
          const double a = Ai[kk];
          const double* Bk = B + (k0 + kk) * n;
          for (std::size_t j = n8; j < n; ++j) Ci[j] += a * Bk[j];
        }
      }
    }
    // leftover rows, all columns
    for (std::size_t i = m4; i < m; ++i) {
      double* Ci = C + i * n;
      const double* Ai = A + i * k + k0;
      for (std::size_t kk = 0; kk < kb; ++kk) {
        const double a = Ai[kk];
        const double* Bk = B + (k0 + kk) * n;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
          __m256d c = _mm256_loadu_pd(Ci + j);
          c = _mm256_fmadd_pd(_mm256_set1_pd(a), _mm256_loadu_pd(Bk + j), c);
          _mm256_storeu_pd(Ci + j, c);
        }
        for (; j < n; ++j) Ci[j] += a * Bk[j];
      }
    }
  }
}

void matmul_d_a(const double* A, const double* B, double* C, std::size_t m,
                std::size_t k, std::size_t n) {
  std::memset(C, 0, m * n * sizeof(double));
  gemm_acc(A, B, C, m, k, n);
}

// Complex product via four real products on split buffers.
void matmul_z_a(const std::complex<double>* A, const std::complex<double>* B,
                std::complex<double>* C, std::size_t m, std::size_t k,
                std::size_t n) {
  std::vector<double> Ar(m * k), Ain(m * k), Br(k * n), Bi(k * n);
  for (std::size_t i = 0; i < m * k; ++i) {
    Ar[i] = A[i].real();
    Ain[i] = A[i].imag();
  }
  for (std::size_t i = 0; i < k * n; ++i) {
    Br[i] = B[i].real();
    Bi[i] = B[i].imag();
  }
  std::vector<double> Cr(m * n, 0.0), Ci(m * n, 0.0);
  gemm_acc(Ar.data(), Br.data(), Cr.data(), m, k, n);
  gemm_acc(Ar.data(), Bi.data(), Ci.data(), m, k, n);
  gemm_acc(Ain.data(), Br.data(), Ci.data(), m, k, n);
  for (std::size_t i = 0; i < m * k; ++i) Ain[i] = -Ain[i];
  gemm_acc(Ain.data(), Bi.data(), Cr.data(), m, k, n);
  for (std::size_t i = 0; i < m * n; ++i) C[i] = {Cr[i], Ci[i]};
}

void cd_cross_row_a(double a, double pN_y, double pNm1_y, const double* pN,
                    const double* pNm1, const double* x, double y,
                    double tie_eps, double* out, std::size_t n) {
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vpy = _mm256_set1_pd(pN_y);
  const __m256d vqy = _mm256_set1_pd(pNm1_y);
  const __m256d veps = _mm256_set1_pd(tie_eps);
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d = _mm256_sub_pd(vy, _mm256_loadu_pd(x + j));
    __m256d num = _mm256_mul_pd(vpy, _mm256_loadu_pd(pNm1 + j));
    num = _mm256_fnmadd_pd(_mm256_loadu_pd(pN + j), vqy, num);
    const __m256d res = _mm256_div_pd(_mm256_mul_pd(va, num), d);
    const __m256d keep =
        _mm256_cmp_pd(_mm256_and_pd(d, absmask), veps, _CMP_GT_OQ);
    const __m256d old = _mm256_loadu_pd(out + j);
    _mm256_storeu_pd(out + j, _mm256_blendv_pd(old, res, keep));
  }
  for (; j < n; ++j) {
    const double d = y - x[j];
    if (std::abs(d) <= tie_eps) continue;
    out[j] = a * (pN_y * pNm1[j] - pN[j] * pNm1_y) / d;
  }
}

}  // namespace

const Ops avx2_ops = {vexp_a, dot_a, wdot_a, matmul_d_a, matmul_z_a,
                      cd_cross_row_a};

}  // namespace dpplab::simd::detail

#endif  // __x86_64__
