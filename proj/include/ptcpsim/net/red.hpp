#pragma once

#include <algorithm>
#include <cstdint>

#include "ptcpsim/core/random.hpp"

namespace ptcpsim {

// Floyd-Jacobson RED sized for the 300-packet bottleneck buffer. The
// averaging weight is chosen so the EWMA settles within tens of
// milliseconds at the bottleneck's ~1250 pkt/s; slower weights let
// synchronized slow-start bursts through untouched and then overreact.
// Thresholds are configuration, not protocol, so everything is overridable.
struct RedParams {
  bool enabled = true;  // disabled -> plain drop-tail
  std::uint32_t buffer_capacity = 300;  // packets
  double min_th = 30;
  double max_th = 270;
  double max_p = 0.1;
  double w_q = 0.05;
};

enum class RedVerdict : std::uint8_t { Accepted, DroppedEarly, DroppedOverflow };

class RedQueue {
 public:
  RedQueue() = default;
  explicit RedQueue(const RedParams& params) : params_(params) {}

  const RedParams& params() const { return params_; }
  double avg() const { return avg_; }
  std::uint32_t occupancy() const { return occupancy_; }
  std::uint64_t count_since_drop() const { return count_; }

  // Test hooks.
  void set_avg(double avg) { avg_ = avg; }
  void set_count(std::uint64_t count) { count_ = count; }
  void set_occupancy(std::uint32_t occ) { occupancy_ = occ; }

  // Early-drop probability for the current (avg, count) state:
  // 0 below min_th, 1 at or above max_th, otherwise the linear base
  // probability adjusted by the packets accepted since the last drop.
  double drop_probability() const {
    if (avg_ < params_.min_th) return 0.0;
    if (avg_ >= params_.max_th) return 1.0;
    double p_b =
        params_.max_p * (avg_ - params_.min_th) / (params_.max_th - params_.min_th);
    double denom = 1.0 - static_cast<double>(count_) * p_b;
    if (denom <= 0.0) return 1.0;
    return std::clamp(p_b / denom, 0.0, 1.0);
  }

  // Decides the fate of an arriving packet. The average is updated by the
  // EWMA before the decision; buffer overflow drops regardless of avg.
  RedVerdict enqueue(RandomStream& rng) {
    avg_ = (1.0 - params_.w_q) * avg_ + params_.w_q * occupancy_;
    if (occupancy_ >= params_.buffer_capacity) {
      count_ = 0;
      return RedVerdict::DroppedOverflow;
    }
    if (params_.enabled && avg_ >= params_.min_th) {
      double p = drop_probability();
      if (p >= 1.0 || (p > 0.0 && rng.u01() < p)) {
        count_ = 0;
        return RedVerdict::DroppedEarly;
      }
      ++count_;
    } else {
      count_ = 0;
    }
    ++occupancy_;
    return RedVerdict::Accepted;
  }

  void on_departure() {
    if (occupancy_ > 0) --occupancy_;
  }

 private:
  RedParams params_{};
  double avg_ = 0;
  std::uint64_t count_ = 0;  // packets accepted since the last drop
  std::uint32_t occupancy_ = 0;
};

inline double red_drop_probability(const RedQueue& q) {
  return q.drop_probability();
}

}  // namespace ptcpsim
