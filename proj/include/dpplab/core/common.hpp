#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpplab {

using cplx = std::complex<double>;

// A point of the ambient space; 1-d objects ignore y.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline cplx to_cplx(Point p) { return {p.x, p.y}; }
inline Point to_point(cplx z) { return {z.real(), z.imag()}; }
inline double dist(Point a, Point b) { return std::abs(to_cplx(a) - to_cplx(b)); }

// Thrown when arguments are outside an operation's supported range.
struct range_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an internal numerical check fails (grid instability,
// truncation-margin disagreement, envelope failure, ...).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw range_error(msg);
}

}  // namespace dpplab
