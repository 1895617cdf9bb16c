#pragma once

#include <algorithm>
#include <cstdint>

#include "ptcpsim/core/engine.hpp"
#include "ptcpsim/net/red.hpp"

namespace ptcpsim {

// Point-to-point link with a serializing transmitter. Packets depart in
// arrival order (FIFO); the departure chain is tracked through busy_until so
// no per-packet queue structure is needed. Bottleneck links additionally own
// a RED queue; access links are plain.
class Link {
 public:
  Link() = default;
  Link(std::uint32_t id, double capacity_bps, double prop_delay_s,
       double cost = 1.0)
      : id_(id), capacity_bps_(capacity_bps), prop_delay_s_(prop_delay_s),
        cost_(cost) {}

  std::uint32_t id() const { return id_; }
  double capacity_bps() const { return capacity_bps_; }
  double prop_delay_s() const { return prop_delay_s_; }
  double cost() const { return cost_; }
  SimTime busy_until() const { return busy_until_; }

  bool has_red() const { return has_red_; }
  RedQueue& red() { return red_; }
  const RedQueue& red() const { return red_; }
  void install_red(const RedParams& params) {
    red_ = RedQueue(params);
    has_red_ = true;
  }

  double serialization_time(std::uint32_t bytes) const {
    return static_cast<double>(bytes) * 8.0 / capacity_bps_;
  }

  // Chains the packet onto the transmitter. Returns the departure time
  // (serialization complete); delivery at the far end is departure plus
  // propagation delay.
  SimTime transmit(SimTime now, std::uint32_t bytes) {
    SimTime start = std::max(now, busy_until_);
    SimTime depart = start + serialization_time(bytes);
    busy_until_ = depart;
    busy_accum_ += depart - start;
    return depart;
  }

  SimTime delivery_time(SimTime depart) const { return depart + prop_delay_s_; }

  // Fraction of elapsed time this link spent transmitting; the route
  // assignment policy reads it as the link's utilization.
  double utilization(SimTime now) const {
    if (now <= 0) return 0.0;
    return std::min(1.0, busy_accum_ / now);
  }

  void set_busy_accum(double s) { busy_accum_ = s; }  // test hook

 private:
  std::uint32_t id_ = 0;
  double capacity_bps_ = 0;
  double prop_delay_s_ = 0;
  double cost_ = 1.0;
  SimTime busy_until_ = 0;
  double busy_accum_ = 0;
  bool has_red_ = false;
  RedQueue red_;
};

}  // namespace ptcpsim
