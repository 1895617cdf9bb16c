#pragma once

#include <cstdint>

#include "ptcpsim/core/engine.hpp"

namespace ptcpsim {

enum class CcPhase : std::uint8_t { SlowStart, CongestionAvoidance, FastRecovery };

// Congestion state common to every variant. The window is kept as a real
// number of MSS; transmission permission uses floor(cwnd). Per-ACK fractional
// growth laws (1/cwnd, 0.01, a(w)/w) are exact only on reals.
struct CcState {
  double cwnd = 2.0;       // MSS
  double ssthresh = 1e9;   // MSS
  double srtt = 0;         // seconds, 0 until the first sample
  double rttvar = 0;
  double rto = 1.0;        // seconds
  std::uint32_t dup_ack_count = 0;
  bool in_fast_recovery = false;
  std::uint32_t high_water_seq = 0;
  double w_last_loss = 0;      // window registered before the last loss
  SimTime t_last_loss = 0;
  CcPhase phase = CcPhase::SlowStart;
};

// Constants for each variant come from the algorithms' original
// specifications; all are configuration-overridable and echoed into run
// metadata.
struct VariantParams {
  // Scalable
  double stcp_a = 0.01;
  double stcp_b = 0.125;
  double stcp_legacy_window = 16;
  // HS-TCP
  double hstcp_low_window = 38;
  double hstcp_high_window = 83000;
  double hstcp_high_p = 1e-7;
  double hstcp_high_decrease = 0.1;
  // H-TCP
  double htcp_delta_l = 1.0;  // seconds
  double htcp_beta_min = 0.5;
  double htcp_beta_max = 0.8;
  // CUBIC
  double cubic_c = 0.4;
  double cubic_beta = 0.2;  // decrease fraction
  bool cubic_tcp_friendly = true;
  // Releases w_max when a flow loses twice below its old plateau, letting
  // competing flows converge; deployed CUBIC ships with this on.
  bool cubic_fast_convergence = true;
};

}  // namespace ptcpsim
