#pragma once

#include <vector>

#include "dpplab/core/common.hpp"
#include "dpplab/simd/simd.hpp"

namespace dpplab {

// Minimal dense row-major matrix; products go through the simd backend.
template <class T>
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T{}) {}

  T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  T* data() { return a.data(); }
  const T* data() const { return a.data(); }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  Mat& operator+=(const Mat& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  Mat& operator*=(T s) {
    for (auto& v : a) v *= s;
    return *this;
  }

  T trace() const {
    T t{};
    for (std::size_t i = 0; i < rows && i < cols; ++i) t += (*this)(i, i);
    return t;
  }

  // Leading r x c block.
  Mat block(std::size_t r, std::size_t c) const {
    Mat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = (*this)(i, j);
    return m;
  }
};

inline Mat<double> operator*(const Mat<double>& A, const Mat<double>& B) {
  Mat<double> C(A.rows, B.cols);
  simd::matmul(A.data(), B.data(), C.data(), A.rows, A.cols, B.cols);
  return C;
}

inline Mat<cplx> operator*(const Mat<cplx>& A, const Mat<cplx>& B) {
  Mat<cplx> C(A.rows, B.cols);
  simd::matmul(A.data(), B.data(), C.data(), A.rows, A.cols, B.cols);
  return C;
}

}  // namespace dpplab
