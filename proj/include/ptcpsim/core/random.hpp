#pragma once

#include <cmath>
#include <cstdint>

namespace ptcpsim {

// Seedable pseudo-random stream based on PCG32 (O'Neill, "PCG: A Family of
// Simple Fast Space-Efficient Statistically Good Algorithms for Random Number
// Generation", pcg-random.org). The generator is fully specified here, so a
// given (seed, stream_id) pair yields the same sequence on every platform.
// Each stochastic source in a simulation owns its own stream; consuming draws
// from one stream never perturbs another.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, 0) {}

  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    state_ = 0u;
    inc_ = (stream_id << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe as a log() argument.
  double u01_open_closed() { return 1.0 - u01(); }

  // Exponentially distributed gap with the given rate (mean 1/rate).
  double exponential(double rate) {
    return -std::log(u01_open_closed()) / rate;
  }

  // Uniform integer in [0, n).
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(u01() * n);
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace ptcpsim
