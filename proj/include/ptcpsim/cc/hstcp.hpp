#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ptcpsim/cc/law.hpp"

namespace ptcpsim {

// HighSpeed TCP response-function parameters. a(w) and b(w) follow the
// RFC 3649 log-interpolation between (low_window, 0.5) and
// (high_window, high_decrease); below low_window the law is exactly standard
// AIMD. low_p is pinned to 1.5/low_window^2 so that a(low_window) == 1 and
// the response is continuous at the boundary.
struct HstcpParams {
  double low_window = 38;
  double high_window = 83000;
  double high_p = 1e-7;
  double high_decrease = 0.1;

  double low_p() const { return 1.5 / (low_window * low_window); }
};

// Decrease fraction b(w): log-linear in w from 0.5 down to high_decrease.
inline double hstcp_b(double w, const HstcpParams& p = {}) {
  if (w < 1.0) throw std::domain_error("hstcp_ab: w must be >= 1");
  if (w <= p.low_window) return 0.5;
  double f = (std::log(w) - std::log(p.low_window)) /
             (std::log(p.high_window) - std::log(p.low_window));
  return 0.5 + f * (p.high_decrease - 0.5);
}

// Loss rate p(w) of the HS-TCP response function (log-log linear).
inline double hstcp_p(double w, const HstcpParams& p = {}) {
  double exponent = (std::log(p.high_p) - std::log(p.low_p())) /
                    (std::log(p.high_window) - std::log(p.low_window));
  return p.low_p() * std::pow(w / p.low_window, exponent);
}

// (a(w), b(w)) pair; a(w) = w^2 p(w) 2 b(w) / (2 - b(w)).
inline std::pair<double, double> hstcp_ab(double w, const HstcpParams& p = {}) {
  if (w < 1.0) throw std::domain_error("hstcp_ab: w must be >= 1");
  if (w <= p.low_window) return {1.0, 0.5};
  double b = hstcp_b(w, p);
  double a = w * w * hstcp_p(w, p) * 2.0 * b / (2.0 - b);
  return {a, b};
}

class HstcpLaw : public CcLaw {
 public:
  HstcpLaw() = default;
  explicit HstcpLaw(const VariantParams& vp)
      : params_{vp.hstcp_low_window, vp.hstcp_high_window, vp.hstcp_high_p,
                vp.hstcp_high_decrease} {}

  const char* name() const override { return "hstcp"; }

  double ack_increment(CcState& s, SimTime /*now*/) override {
    if (s.phase == CcPhase::SlowStart) return 1.0;
    return hstcp_ab(s.cwnd, params_).first / s.cwnd;
  }

  double loss_cwnd(CcState& s, SimTime /*now*/) override {
    double b = hstcp_b(s.cwnd, params_);
    return (1.0 - b) * s.cwnd;
  }

  const HstcpParams& params() const { return params_; }

 private:
  HstcpParams params_{};
};

}  // namespace ptcpsim
