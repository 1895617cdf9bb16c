#pragma once

#include "ptcpsim/cc/law.hpp"

namespace ptcpsim {

// Scalable TCP (Kelly): fixed per-ACK increment a above the legacy window,
// standard growth below it, and the multiplicative decrease b at every
// scale. Growth then depends only on the round-trip time.
class ScalableLaw : public CcLaw {
 public:
  ScalableLaw() = default;
  explicit ScalableLaw(const VariantParams& p)
      : a_(p.stcp_a), b_(p.stcp_b), legacy_window_(p.stcp_legacy_window) {}

  const char* name() const override { return "scalable"; }

  double ack_increment(CcState& s, SimTime /*now*/) override {
    if (s.phase == CcPhase::SlowStart) return 1.0;  // standard slow start
    if (s.cwnd > legacy_window_) return a_;
    return 1.0 / s.cwnd;
  }

  double loss_cwnd(CcState& s, SimTime /*now*/) override {
    return (1.0 - b_) * s.cwnd;
  }

 private:
  double a_ = 0.01;
  double b_ = 0.125;
  double legacy_window_ = 16;
};

}  // namespace ptcpsim
