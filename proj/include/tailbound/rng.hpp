#pragma once
// Counter-based random streams for reproducible parallel Monte Carlo.
//
// A stream's state is a pure function of (seed, substream index), so trial i
// draws an identical sequence no matter which worker executes it or how the
// trial range is partitioned. The core generator is the splitmix64 finalizer
// iterated over a Weyl sequence; distributional transforms are implemented
// here rather than via <random> because libstdc++/libc++ distributions are
// not bit-reproducible across standard libraries.

#include <cmath>
#include <cstdint>

#include "tailbound/errors.hpp"

namespace tailbound {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(mix(seed ^ kStreamSalt)) {}

  // Substream for one trial: decorrelates (seed, index) pairs through two
  // finalizer rounds so adjacent indices share no low-bit structure.
  static RngStream substream(std::uint64_t seed, std::uint64_t index) {
    RngStream s(0);
    s.state_ = mix(mix(seed ^ kStreamSalt) + index * kGamma);
    return s;
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1); safe to pass to log().
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  int rademacher() { return (next_u64() >> 63) ? 1 : -1; }

  // Box-Muller; consumes exactly two uniforms per call (the sine branch is
  // discarded to keep the stream layout independent of call history).
  double normal() {
    const double u = uniform_open();
    const double t = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * t);
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw domain_error("exponential: rate must be > 0");
    return -std::log(uniform_open()) / rate;
  }

  // Knuth product method; draw count grows with mean, so keep mean modest.
  std::int64_t poisson(double mean) {
    if (!(mean >= 0.0)) throw domain_error("poisson: mean must be >= 0");
    if (mean > 60.0) throw domain_error("poisson: mean > 60 unsupported");
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double prod = uniform_open();
    while (prod > limit) {
      ++k;
      prod *= uniform_open();
    }
    return k;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  static constexpr std::uint64_t kStreamSalt = 0x5851f42d4c957f2dull;

  static std::uint64_t mix(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111afull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace tailbound
