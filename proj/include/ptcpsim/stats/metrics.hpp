#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptcpsim/core/engine.hpp"

namespace ptcpsim {

// Per-flow counters. data_packets_sent counts every data transmission
// including retransmissions; bytes_delivered counts unique in-order bytes at
// the receiver.
struct FlowStats {
  std::uint32_t flow_id = 0;
  std::uint64_t data_packets_sent = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t drops_observed = 0;       // bottleneck drops of this flow
  std::uint64_t arrivals_at_receiver = 0; // all data arrivals incl. duplicates
  std::uint64_t bytes_delivered = 0;      // unique in-order
  std::int64_t packets_in_flight = 0;     // on links or queued, live counter
};

struct FairnessReport {
  std::vector<double> throughputs_bps;
  std::size_t n = 0;
  double jfi = 0;
};

// Mathis model inputs; the coefficient sqrt(3/2) is the model constant.
struct MathisInputs {
  double mss_bytes = 1000;
  double rtt_s = 0.1;
  double loss_p = 0;
  double coefficient = std::sqrt(1.5);
};

// Fraction of capacity carried over the interval, clamped to [0, 1].
inline double utilization(double delivered_bits, double capacity_bps,
                          double interval_s) {
  if (capacity_bps <= 0 || interval_s <= 0)
    throw std::invalid_argument("utilization: capacity and interval must be positive");
  return std::clamp(delivered_bits / (capacity_bps * interval_s), 0.0, 1.0);
}

// Unnecessary-retransmission fraction; zero packets sent is defined as 0.
inline double loss_ratio(std::uint64_t retransmissions, std::uint64_t data_packets_sent) {
  if (data_packets_sent == 0) return 0.0;
  return static_cast<double>(retransmissions) / static_cast<double>(data_packets_sent);
}

inline double loss_ratio(const FlowStats& s) {
  return loss_ratio(s.retransmissions, s.data_packets_sent);
}

inline double loss_ratio(std::span<const FlowStats> flows) {
  std::uint64_t retx = 0, sent = 0;
  for (const auto& f : flows) {
    retx += f.retransmissions;
    sent += f.data_packets_sent;
  }
  return loss_ratio(retx, sent);
}

// Jain's fairness index: (sum x)^2 / (n sum x^2), in [1/n, 1].
inline double jfi(std::span<const double> throughputs) {
  if (throughputs.empty()) throw std::domain_error("jfi: empty throughput vector");
  double sum = 0, sum_sq = 0;
  for (double x : throughputs) {
    if (x < 0) throw std::domain_error("jfi: negative throughput");
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0) throw std::domain_error("jfi: all-zero throughput vector");
  return (sum * sum) / (static_cast<double>(throughputs.size()) * sum_sq);
}

inline FairnessReport fairness_report(std::vector<double> throughputs) {
  FairnessReport r;
  r.n = throughputs.size();
  r.jfi = jfi(throughputs);
  r.throughputs_bps = std::move(throughputs);
  return r;
}

// Mathis throughput estimate: coefficient * MSS / (rtt sqrt(p)), in bits/s.
inline double mathis_estimate(const MathisInputs& in) {
  if (in.loss_p <= 0) throw std::domain_error("mathis_estimate: p must be positive");
  if (in.rtt_s <= 0) throw std::domain_error("mathis_estimate: rtt must be positive");
  return in.coefficient * (in.mss_bytes * 8.0) / (in.rtt_s * std::sqrt(in.loss_p));
}

}  // namespace ptcpsim
