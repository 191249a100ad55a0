#include "dpplab/core/rng.hpp"

#include <cmath>
#include <numbers>

#include "dpplab/core/common.hpp"

namespace dpplab {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

std::array<std::uint32_t, 4> philox10(std::array<std::uint32_t, 4> ctr,
                                      std::uint32_t k0, std::uint32_t k1) {
  for (int r = 0; r < 10; ++r) {
    philox_round(ctr, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return ctr;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t replica)
    : seed_(seed), replica_(replica) {}

void RngStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(counter_),
      static_cast<std::uint32_t>(counter_ >> 32),
      static_cast<std::uint32_t>(replica_),
      static_cast<std::uint32_t>(replica_ >> 32)};
  buf_ = philox10(ctr, static_cast<std::uint32_t>(seed_),
                  static_cast<std::uint32_t>(seed_ >> 32));
  ++counter_;
  avail_ = 4;
}

std::uint64_t RngStream::next_u64() {
  if (avail_ < 2) refill();
  const std::uint64_t hi = buf_[avail_ - 1];
  const std::uint64_t lo = buf_[avail_ - 2];
  avail_ -= 2;
  return (hi << 32) | lo;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() { return 1.0 - uniform(); }

double RngStream::uniform(double a, double b) { return a + (b - a) * uniform(); }

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double th = 2.0 * std::numbers::pi * uniform();
  cached_normal_ = r * std::sin(th);
  has_cached_normal_ = true;
  return r * std::cos(th);
}

double RngStream::exponential() { return -std::log(uniform_open()); }

double RngStream::gamma(double shape, double rate) {
  require(shape > 0.0 && rate > 0.0, "gamma: shape, rate > 0");
  const double k = std::floor(shape);
  if (shape == k && k <= 32) {
    double s = 0.0;
    for (int i = 0; i < static_cast<int>(k); ++i) s += exponential();
    return s / rate;
  }
  // Marsaglia-Tsang; boost shape < 1 by one and rescale.
  if (shape < 1.0) {
    const double u = uniform_open();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

}  // namespace dpplab
