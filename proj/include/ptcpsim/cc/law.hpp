#pragma once

#include "ptcpsim/cc/state.hpp"

namespace ptcpsim {

// Pluggable congestion-control law. The flow machinery owns loss detection,
// recovery bookkeeping and clamping; laws only provide the per-ACK growth
// increment and the multiplicative decrease. Keeping the laws pure makes the
// decrease ratios directly testable.
class CcLaw {
 public:
  virtual ~CcLaw() = default;
  virtual const char* name() const = 0;

  // Window increment for one new-data ACK (one MSS acknowledged).
  virtual double ack_increment(CcState& s, SimTime now) = 0;

  // New cwnd after a triple-duplicate-ACK loss; also rolls any per-epoch
  // variant state (cubic epoch, H-TCP rtt extrema).
  virtual double loss_cwnd(CcState& s, SimTime now) = 0;

  // Epoch state reset after a retransmission timeout.
  virtual void on_rto(CcState& /*s*/, SimTime /*now*/) {}

  virtual void on_rtt_sample(double /*rtt_s*/) {}
};

}  // namespace ptcpsim
