#pragma once

#include <cstdint>

#include "ptcpsim/core/random.hpp"

namespace ptcpsim {

// Open-loop Poisson packet source used as background traffic. A rate of zero
// disables the source (no events are ever scheduled).
struct PoissonSource {
  double rate_pps = 0;             // packets per second
  std::uint32_t packet_bytes = 1000;
  std::uint32_t destination = 0;   // host id
  RandomStream stream;

  bool enabled() const { return rate_pps > 0; }

  // Exponentially distributed inter-arrival gap with mean 1/rate.
  double next_gap() { return stream.exponential(rate_pps); }
};

inline double poisson_next_gap(PoissonSource& src) { return src.next_gap(); }

}  // namespace ptcpsim
