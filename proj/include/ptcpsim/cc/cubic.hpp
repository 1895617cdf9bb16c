#pragma once

#include <algorithm>
#include <cmath>

#include "ptcpsim/cc/law.hpp"

namespace ptcpsim {

// CUBIC: the window follows W(t) = C (t - K)^3 + w_max from the epoch start
// at the last loss, with K chosen so the curve is continuous at the loss
// (W(0) = (1 - beta) w_max) and crests at w_max at t = K. A TCP-friendly
// floor keeps it no slower than equivalent AIMD at small scale.
class CubicLaw : public CcLaw {
 public:
  CubicLaw() = default;
  explicit CubicLaw(const VariantParams& p)
      : c_(p.cubic_c), beta_(p.cubic_beta), tcp_friendly_(p.cubic_tcp_friendly),
        fast_convergence_(p.cubic_fast_convergence) {}

  const char* name() const override { return "cubic"; }

  double window_target(SimTime now) const {
    double t = now - epoch_start_;
    double d = t - k_;
    return c_ * d * d * d + w_max_;
  }

  double tcp_friendly_target(SimTime now, double srtt) const {
    if (srtt <= 0) return 0;
    double t = now - epoch_start_;
    return w_max_ * (1.0 - beta_) + (3.0 * beta_ / (2.0 - beta_)) * (t / srtt);
  }

  double ack_increment(CcState& s, SimTime now) override {
    if (s.phase == CcPhase::SlowStart) return 1.0;
    if (!epoch_valid_) start_epoch(s.cwnd, now);
    double target = window_target(now);
    if (tcp_friendly_)
      target = std::max(target, tcp_friendly_target(now, s.srtt));
    if (target > s.cwnd) return (target - s.cwnd) / s.cwnd;
    return 0.01 / s.cwnd;  // slow probing beyond the plateau
  }

  double loss_cwnd(CcState& s, SimTime now) override {
    double w = s.cwnd;
    if (fast_convergence_ && w < w_max_) {
      w_max_ = w * (2.0 - beta_) / 2.0;
    } else {
      w_max_ = w;
    }
    epoch_start_ = now;
    k_ = std::cbrt(w_max_ * beta_ / c_);
    epoch_valid_ = true;
    return (1.0 - beta_) * w;
  }

  void on_rto(CcState& /*s*/, SimTime /*now*/) override {
    // Epoch restarts from the post-recovery window once congestion
    // avoidance resumes.
    epoch_valid_ = false;
  }

  double w_max() const { return w_max_; }
  double k() const { return k_; }
  SimTime epoch_start() const { return epoch_start_; }

 private:
  void start_epoch(double cwnd, SimTime now) {
    epoch_start_ = now;
    if (w_max_ < cwnd) w_max_ = cwnd;
    k_ = std::cbrt(std::max(0.0, w_max_ - cwnd) / c_);
    epoch_valid_ = true;
  }

  double c_ = 0.4;
  double beta_ = 0.2;
  bool tcp_friendly_ = true;
  bool fast_convergence_ = false;
  double w_max_ = 0;
  double k_ = 0;
  SimTime epoch_start_ = 0;
  bool epoch_valid_ = false;
};

}  // namespace ptcpsim
