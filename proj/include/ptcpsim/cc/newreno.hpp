#pragma once

#include "ptcpsim/cc/law.hpp"

namespace ptcpsim {

// Standard AIMD: slow start doubles per RTT, congestion avoidance adds one
// MSS per RTT, loss halves the window.
class NewRenoLaw : public CcLaw {
 public:
  const char* name() const override { return "newreno"; }

  double ack_increment(CcState& s, SimTime /*now*/) override {
    if (s.phase == CcPhase::SlowStart) return 1.0;
    return 1.0 / s.cwnd;
  }

  double loss_cwnd(CcState& s, SimTime /*now*/) override { return s.cwnd / 2.0; }
};

}  // namespace ptcpsim
