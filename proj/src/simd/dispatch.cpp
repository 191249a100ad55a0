#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "dpplab/simd/simd.hpp"

namespace dpplab::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend pick_default() {
  if (const char* env = std::getenv("DPPLAB_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && cpu_has_avx2()) return Backend::avx2;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{pick_default()};

const detail::Ops& table(Backend b) {
#if defined(__x86_64__)
  if (b == Backend::avx2) return detail::avx2_ops;
#endif
  return detail::scalar_ops;
}

const detail::Ops& ops() { return table(g_backend.load(std::memory_order_relaxed)); }

}  // namespace

Backend active_backend() { return g_backend.load(); }

bool supported(Backend b) { return b == Backend::scalar || cpu_has_avx2(); }

void set_backend(Backend b) {
  if (!supported(b)) throw std::runtime_error("simd backend not supported on this CPU");
  g_backend.store(b);
}

std::string backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void vexp(const double* x, double* out, std::size_t n) { ops().vexp(x, out, n); }

double dot(const double* a, const double* b, std::size_t n) {
  return ops().dot(a, b, n);
}

double wdot(const double* w, const double* a, const double* b, std::size_t n) {
  return ops().wdot(w, a, b, n);
}

void matmul(const double* A, const double* B, double* C, std::size_t m,
            std::size_t k, std::size_t n) {
  ops().matmul_d(A, B, C, m, k, n);
}

void matmul(const std::complex<double>* A, const std::complex<double>* B,
            std::complex<double>* C, std::size_t m, std::size_t k,
            std::size_t n) {
  ops().matmul_z(A, B, C, m, k, n);
}

void cd_cross_row(double a, double pN_y, double pNm1_y, const double* pN,
                  const double* pNm1, const double* x, double y, double tie_eps,
                  double* out, std::size_t n) {
  ops().cd_cross_row(a, pN_y, pNm1_y, pN, pNm1, x, y, tie_eps, out, n);
}

}  // namespace dpplab::simd
