#pragma once

#include <array>
#include <cstdint>

namespace dpplab {

// Counter-based stream (Philox4x32-10).  Streams with distinct
// (seed, replica) pairs are independent by construction and a given pair
// reproduces the same sequence bit-for-bit on any platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replica);

  std::uint64_t next_u64();
  double uniform();                    // [0,1)
  double uniform_open();               // (0,1]
  double uniform(double a, double b);  // [a,b)
  double normal();
  double exponential();                        // rate 1
  double gamma(double shape, double rate);     // shape > 0
  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica() const { return replica_; }

 private:
  void refill();
  std::uint64_t seed_, replica_, counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int avail_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace dpplab
