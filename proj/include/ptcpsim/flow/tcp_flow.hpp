#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ptcpsim/cc/law.hpp"
#include "ptcpsim/net/packet.hpp"
#include "ptcpsim/stats/metrics.hpp"

namespace ptcpsim {

struct FlowConfig {
  std::uint32_t mss_bytes = 1000;
  double initial_cwnd = 2.0;  // MSS
  double initial_ssthresh = 1e9;  // MSS
  double rto_min_s = 1.0;
  double rto_max_s = 60.0;
  // Window cap in MSS. The default models a 32 KiB receive window, the
  // classic socket-buffer default of stacks without window scaling
  // (32768 B / 1000 B); raise it per scenario to make windows effectively
  // unbounded.
  double max_cwnd = 32.768;
};

// Environment a flow talks to: packet injection and timer scheduling. The
// simulation implements it; unit tests may stub it.
class FlowEnv {
 public:
  virtual ~FlowEnv() = default;
  virtual void send_data(Packet& p) = 0;
  virtual void send_ack(Packet& p) = 0;
  virtual void schedule_rto(std::uint32_t flow_id, SimTime at) = 0;
  virtual std::uint64_t next_packet_id() = 0;
};

// One TCP sender/receiver pair with a pluggable congestion-control law.
// Loss detection is triple-duplicate-ACK plus RTO; recovery is the classic
// NewReno fast-recovery machinery (SACK/FACK do not exist here), with the
// multiplicative decrease delegated to the variant law. The receiver acks
// every data packet and echoes the data timestamp so RTT samples obey
// Karn's rule.
class TcpFlow {
 public:
  TcpFlow(std::uint32_t id, std::unique_ptr<CcLaw> law, const FlowConfig& cfg,
          FlowEnv* env)
      : id_(id), cfg_(cfg), law_(std::move(law)), env_(env) {
    cc_.cwnd = cfg.initial_cwnd;
    cc_.ssthresh = cfg.initial_ssthresh;
    cc_.rto = std::max(1.0, cfg.rto_min_s);
    stats_.flow_id = id;
  }

  std::uint32_t id() const { return id_; }
  bool started() const { return started_; }
  double window() const { return cc_.cwnd; }
  const CcState& cc() const { return cc_; }
  CcLaw& law() { return *law_; }
  FlowStats& stats() { return stats_; }
  const FlowStats& stats() const { return stats_; }
  std::uint32_t in_flight() const { return next_seq_ - snd_una_; }
  std::uint64_t delivered_mss() const { return rcv_next_; }
  std::uint64_t rto_count() const { return rto_count_; }
  std::uint64_t recovery_count() const { return recovery_count_; }
  SimTime start_time() const { return start_time_; }

  void start(SimTime now) {
    started_ = true;
    start_time_ = now;
    pump(now);
  }

  // --- sender side ---

  void on_ack(const Packet& ack, SimTime now) {
    if (ack.ack_no > hwm_) {
      std::ostringstream msg;
      msg << "flow " << id_ << ": ACK for never-sent sequence " << ack.ack_no
          << " (highest sent " << hwm_ << ")";
      throw std::logic_error(msg.str());
    }
    if (ack.ack_no > snd_una_) {
      on_new_ack(ack, now);
    } else if (ack.ack_no == snd_una_ && snd_una_ < next_seq_) {
      on_dup_ack(now);
    }
    pump(now);
  }

  void on_rto_event(SimTime now) {
    timer_pending_ = false;
    if (snd_una_ == next_seq_) return;  // nothing outstanding
    if (now < rto_deadline_) {          // deadline moved forward; re-arm
      ensure_timer();
      return;
    }
    timeout(now);
    pump(now);
  }

  // --- receiver side ---

  void on_data(const Packet& p, SimTime /*now*/) {
    ++stats_.arrivals_at_receiver;
    if (p.seq_no == rcv_next_) {
      ++rcv_next_;
      auto it = out_of_order_.begin();
      while (it != out_of_order_.end() && *it == rcv_next_) {
        ++rcv_next_;
        it = out_of_order_.erase(it);
      }
      stats_.bytes_delivered =
          static_cast<std::uint64_t>(rcv_next_) * cfg_.mss_bytes;
    } else if (p.seq_no > rcv_next_) {
      out_of_order_.insert(p.seq_no);
    }
    Packet ack;
    ack.id = p.id;
    ack.flow_id = id_;
    ack.size_bytes = kAckBytes;
    ack.kind = PacketKind::Ack;
    ack.ack_no = rcv_next_;
    ack.sent_at = p.sent_at;                    // timestamp echo
    ack.is_retransmission = p.is_retransmission;  // Karn's rule marker
    env_->send_ack(ack);
  }

 private:
  void on_new_ack(const Packet& ack, SimTime now) {
    std::uint32_t newly = ack.ack_no - snd_una_;
    snd_una_ = ack.ack_no;
    // After a timeout rewind, a cumulative ack from the old flight may
    // overtake the send pointer; everything below it needs no resend.
    if (next_seq_ < snd_una_) next_seq_ = snd_una_;
    if (!ack.is_retransmission) rtt_sample(now - ack.sent_at);
    arm_timer(now);
    if (cc_.in_fast_recovery) {
      if (ack.ack_no >= recover_seq_) {
        // Full ack: deflate to ssthresh and leave recovery.
        cc_.cwnd = cc_.ssthresh;
        cc_.in_fast_recovery = false;
        cc_.phase = CcPhase::CongestionAvoidance;
        cc_.dup_ack_count = 0;
      } else {
        // Partial ack: the next hole is lost too; retransmit and deflate.
        retransmit(snd_una_, now);
        cc_.cwnd = std::max(cc_.cwnd - newly + 1.0, 1.0);
      }
      return;
    }
    cc_.dup_ack_count = 0;
    if (cc_.phase == CcPhase::SlowStart && cc_.cwnd >= cc_.ssthresh)
      cc_.phase = CcPhase::CongestionAvoidance;
    double inc = law_->ack_increment(cc_, now);
    cc_.cwnd = std::min(cc_.cwnd + inc, cfg_.max_cwnd);
  }

  void on_dup_ack(SimTime now) {
    ++cc_.dup_ack_count;
    if (cc_.in_fast_recovery) {
      // Inflation: each dup signals a departed packet.
      cc_.cwnd = std::min(cc_.cwnd + 1.0, cfg_.max_cwnd);
      return;
    }
    // Dup acks below the previous recovery point are echoes of an already
    // repaired loss; re-entering recovery for them would halve twice.
    if (cc_.dup_ack_count == 3 && snd_una_ >= recover_seq_)
      enter_fast_recovery(now);
  }

  void enter_fast_recovery(SimTime now) {
    double before = cc_.cwnd;
    double after = law_->loss_cwnd(cc_, now);
    cc_.w_last_loss = before;
    cc_.t_last_loss = now;
    cc_.ssthresh = std::max(after, 2.0);
    cc_.cwnd = cc_.ssthresh + 3.0;
    cc_.in_fast_recovery = true;
    cc_.phase = CcPhase::FastRecovery;
    recover_seq_ = next_seq_;
    ++recovery_count_;
    retransmit(snd_una_, now);
    arm_timer(now);
  }

  void timeout(SimTime now) {
    law_->on_rto(cc_, now);
    cc_.w_last_loss = cc_.cwnd;
    cc_.t_last_loss = now;
    cc_.ssthresh = std::max(cc_.cwnd / 2.0, 2.0);
    cc_.cwnd = 1.0;
    cc_.phase = CcPhase::SlowStart;
    cc_.in_fast_recovery = false;
    cc_.dup_ack_count = 0;
    cc_.rto = std::min(cc_.rto * 2.0, cfg_.rto_max_s);  // exponential backoff
    ++rto_count_;
    recover_seq_ = hwm_;  // no fast retransmit for the old flight's echoes
    // Go-back-N: the outstanding window is presumed lost; rewind the send
    // pointer and let the reopening window drive the resends.
    next_seq_ = snd_una_;
    retransmit(snd_una_, now);
    ++next_seq_;
    arm_timer(now);
  }

  void rtt_sample(double r) {
    if (r <= 0) return;
    if (srtt_valid_) {
      cc_.rttvar = 0.75 * cc_.rttvar + 0.25 * std::abs(cc_.srtt - r);
      cc_.srtt = 0.875 * cc_.srtt + 0.125 * r;
    } else {
      cc_.srtt = r;
      cc_.rttvar = r / 2.0;
      srtt_valid_ = true;
    }
    cc_.rto = std::clamp(cc_.srtt + 4.0 * cc_.rttvar, cfg_.rto_min_s,
                         cfg_.rto_max_s);
    law_->on_rtt_sample(r);
  }

  void pump(SimTime now) {
    if (!started_) return;
    auto allowed = static_cast<std::uint32_t>(std::floor(cc_.cwnd));
    while (next_seq_ - snd_una_ < allowed) {
      bool was_idle = (next_seq_ == snd_una_);
      send_segment(next_seq_, now);
      ++next_seq_;
      if (was_idle) arm_timer(now);
    }
  }

  // Anything at or below the transmitted high-water mark is a resend.
  void send_segment(std::uint32_t seq, SimTime now) {
    Packet p;
    p.id = env_->next_packet_id();
    p.flow_id = id_;
    p.seq_no = seq;
    p.size_bytes = cfg_.mss_bytes;
    p.kind = PacketKind::Data;
    p.sent_at = now;
    p.is_retransmission = seq < hwm_;
    ++stats_.data_packets_sent;
    if (p.is_retransmission) ++stats_.retransmissions;
    if (seq >= hwm_) {
      hwm_ = seq + 1;
      cc_.high_water_seq = hwm_ - 1;
    }
    env_->send_data(p);
  }

  void retransmit(std::uint32_t seq, SimTime now) { send_segment(seq, now); }

  void arm_timer(SimTime now) {
    rto_deadline_ = now + cc_.rto;
    ensure_timer();
  }

  void ensure_timer() {
    if (timer_pending_) return;
    env_->schedule_rto(id_, rto_deadline_);
    timer_pending_ = true;
  }

  std::uint32_t id_;
  FlowConfig cfg_;
  std::unique_ptr<CcLaw> law_;
  FlowEnv* env_;
  CcState cc_;
  FlowStats stats_;
  bool started_ = false;
  SimTime start_time_ = 0;

  // Sender sequence state, in MSS units.
  std::uint32_t snd_una_ = 0;
  std::uint32_t next_seq_ = 0;
  std::uint32_t hwm_ = 0;  // one past the highest sequence ever transmitted
  std::uint32_t recover_seq_ = 0;
  bool srtt_valid_ = false;
  SimTime rto_deadline_ = 0;
  bool timer_pending_ = false;
  std::uint64_t rto_count_ = 0;
  std::uint64_t recovery_count_ = 0;

  // Receiver state.
  std::uint32_t rcv_next_ = 0;
  std::set<std::uint32_t> out_of_order_;
};

}  // namespace ptcpsim
