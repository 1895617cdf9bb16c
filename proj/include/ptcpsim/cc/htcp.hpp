#pragma once

#include <algorithm>

#include "ptcpsim/cc/law.hpp"

namespace ptcpsim {

// H-TCP growth factor as a function of the time since the last loss:
// 1 within the legacy interval delta_l, then the quadratic ramp.
inline double htcp_alpha(double delta_s, double delta_l = 1.0) {
  if (delta_s <= delta_l) return 1.0;
  double d = delta_s - delta_l;
  return 1.0 + 10.0 * d + (d / 2.0) * (d / 2.0);
}

// H-TCP: growth keyed to the elapsed time since the last loss event, with an
// adaptive decrease factor derived from the RTT extremes of the congestion
// epoch.
class HtcpLaw : public CcLaw {
 public:
  HtcpLaw() = default;
  explicit HtcpLaw(const VariantParams& p)
      : delta_l_(p.htcp_delta_l), beta_min_(p.htcp_beta_min),
        beta_max_(p.htcp_beta_max) {}

  const char* name() const override { return "htcp"; }

  double ack_increment(CcState& s, SimTime now) override {
    if (s.phase == CcPhase::SlowStart) return 1.0;
    double alpha = htcp_alpha(now - s.t_last_loss, delta_l_);
    return 2.0 * (1.0 - beta_) * alpha / s.cwnd;
  }

  // Adaptive backoff from the RTT extrema of the congestion epoch that just
  // ended; the extrema then restart for the next epoch.
  double loss_cwnd(CcState& s, SimTime /*now*/) override {
    if (rtt_max_ > 0)
      beta_ = std::clamp(rtt_min_ / rtt_max_, beta_min_, beta_max_);
    rtt_min_ = 0;
    rtt_max_ = 0;
    return beta_ * s.cwnd;
  }

  void on_rtt_sample(double rtt_s) override {
    if (rtt_min_ == 0 || rtt_s < rtt_min_) rtt_min_ = rtt_s;
    if (rtt_s > rtt_max_) rtt_max_ = rtt_s;
  }

  double beta() const { return beta_; }

 private:
  double delta_l_ = 1.0;
  double beta_min_ = 0.5;
  double beta_max_ = 0.8;
  double beta_ = 0.5;
  double rtt_min_ = 0;
  double rtt_max_ = 0;
};

}  // namespace ptcpsim
