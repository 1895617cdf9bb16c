#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptcpsim/core/engine.hpp"

namespace ptcpsim {

// A parallel TCP session: n independent flows of one variant, established
// serially. There is no shared window state; the aggregate window is a
// derived observable, never a control variable.
struct ParallelSession {
  std::uint32_t session_id = 0;
  std::vector<std::uint32_t> flow_ids;
  std::uint32_t n = 0;
  double stagger_s = 0.2;  // one base RTT between establishments
  std::string variant = "newreno";
};

struct AcwSample {
  SimTime t = 0;
  double acw = 0;                // exact sum of per_flow
  std::vector<double> per_flow;  // MSS
};

// Start times for serialized establishment: flow k starts at t0 + k*stagger.
inline std::vector<SimTime> establishment_times(const ParallelSession& session,
                                                SimTime t0) {
  if (session.n == 0)
    throw std::invalid_argument("parallel session must have at least one flow");
  std::vector<SimTime> times;
  times.reserve(session.n);
  for (std::uint32_t k = 0; k < session.n; ++k)
    times.push_back(t0 + k * session.stagger_s);
  return times;
}

// Aggregated congestion window: the exact sum of the per-flow windows.
inline double acw(std::span<const double> per_flow_cwnd) {
  return std::accumulate(per_flow_cwnd.begin(), per_flow_cwnd.end(), 0.0);
}

// Window reduction fraction relative to the maximum aggregate.
inline double reduction(double max_acw, double current_acw) {
  if (max_acw <= 0) throw std::domain_error("reduction: max_acw must be positive");
  if (current_acw > max_acw)
    throw std::domain_error("reduction: current_acw exceeds max_acw");
  return (max_acw - current_acw) / max_acw;
}

// Smallest flow count expected to saturate the bottleneck given a per-flow
// throughput estimate (e.g. from the Mathis model).
inline std::uint32_t parallelism_threshold(double bottleneck_bps,
                                           double per_flow_estimate_bps) {
  if (bottleneck_bps <= 0 || per_flow_estimate_bps <= 0)
    throw std::domain_error("parallelism_threshold: inputs must be positive");
  double n = std::ceil(bottleneck_bps / per_flow_estimate_bps);
  return n < 1.0 ? 1u : static_cast<std::uint32_t>(n);
}

}  // namespace ptcpsim
