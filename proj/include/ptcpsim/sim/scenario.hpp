#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptcpsim/cc/variant.hpp"
#include "ptcpsim/core/engine.hpp"
#include "ptcpsim/core/random.hpp"
#include "ptcpsim/flow/tcp_flow.hpp"
#include "ptcpsim/net/packet.hpp"
#include "ptcpsim/net/poisson.hpp"
#include "ptcpsim/net/topology.hpp"
#include "ptcpsim/parallel/session.hpp"
#include "ptcpsim/stats/metrics.hpp"

namespace ptcpsim {

struct BackgroundConfig {
  double rate_pps = 125;  // ~10% of a 10 Mbps bottleneck at 1000 B packets
  std::uint32_t packet_bytes = 1000;
};

struct LossInjection {
  std::uint32_t flow_id = 0;
  SimTime at = 0;
};

// Forced-loss controls for controlled experiments: a uniform per-packet drop
// probability and one-shot injections, both applied at the bottleneck
// ingress ahead of RED.
struct LossConfig {
  double uniform_drop_p = 0;
  std::vector<LossInjection> injections;
};

struct ScenarioConfig {
  std::string variant = "newreno";
  std::uint32_t n_flows = 1;
  double duration_s = 1000;
  double warmup_s = 100;  // measurement starts here
  double sample_interval_s = 1.0;
  double stagger_s = 0.2;
  LinkConfig link;
  RedParams red;
  BackgroundConfig background;
  FlowConfig tcp;
  RoutePolicy route;
  VariantParams variant_params;
  LossConfig loss;
  std::uint64_t seed = 1;
  bool check_invariants = true;
  bool record_series = true;
};

struct SeriesPoint {
  SimTime t = 0;
  std::uint32_t flow_id = 0;
  double goodput_bps = 0;
  double cwnd = 0;
  std::uint32_t queue_len = 0;
  double queue_avg = 0;
};

// Aggregate-window samples reconstructed from the per-flow series rows.
inline std::vector<AcwSample> acw_series(const std::vector<SeriesPoint>& series) {
  std::vector<AcwSample> out;
  for (const auto& p : series) {
    if (out.empty() || out.back().t != p.t)
      out.push_back(AcwSample{p.t, 0.0, {}});
    out.back().per_flow.push_back(p.cwnd);
  }
  for (auto& sample : out) sample.acw = acw(sample.per_flow);
  return out;
}

// Steady-state metrics over [warmup, duration] plus the sampled series.
struct ScenarioResult {
  double utilization = 0;      // bottleneck total: session + background
  double utilization_tcp = 0;  // session flows only
  double loss_ratio = 0;       // retransmissions / data packets sent
  double jfi = 0;
  double acw_mean = 0;
  std::uint64_t drops = 0;  // bottleneck drops of session flows
  std::uint64_t retransmissions = 0;
  std::uint64_t loss_events = 0;  // recovery entries + timeouts
  double loss_event_rate = 0;     // events per data packet sent
  double srtt_mean = 0;
  double rtt_base = 0;  // no-load round trip of the dumbbell
  std::vector<double> per_flow_goodput_bps;
  std::vector<SeriesPoint> series;
  std::uint64_t events_processed = 0;
  std::uint64_t background_drops = 0;
  std::uint64_t rto_total = 0;
  bool failed = false;
  std::string fail_reason;
};

// One dumbbell experiment: n parallel flows of one variant, RED bottleneck,
// Poisson background, serialized establishment. Owns a private engine, so
// scenarios are independent and replays are bit-exact for a given seed.
class Simulation : public FlowEnv {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        topo_(build_dumbbell(cfg.link, cfg.red, cfg.n_flows + 1)),
        drop_rng_(cfg.seed, 2) {
    if (cfg.n_flows == 0)
      throw std::invalid_argument("scenario requires at least one flow");
    if (cfg.duration_s <= cfg.warmup_s)
      throw std::invalid_argument("duration must exceed warmup");

    session_.session_id = 0;
    session_.n = cfg.n_flows;
    session_.stagger_s = cfg.stagger_s;
    session_.variant = cfg.variant;

    flows_.reserve(cfg.n_flows);
    for (std::uint32_t i = 0; i < cfg.n_flows; ++i) {
      flows_.push_back(std::make_unique<TcpFlow>(
          i, make_cc_law(cfg.variant, cfg.variant_params), cfg.tcp, this));
      session_.flow_ids.push_back(i);
    }
    routes_.assign(cfg.n_flows + 1, 0);
    snap_delivered_.assign(cfg.n_flows, 0);
    last_bytes_.assign(cfg.n_flows, 0);
    injections_ = cfg.loss.injections;
    injection_done_.assign(injections_.size(), false);

    for (std::size_t i = 0; i < topo_.bottleneck_fwd.size(); ++i)
      red_rngs_.emplace_back(cfg.seed, 100 + i);

    background_.rate_pps = cfg.background.rate_pps;
    background_.packet_bytes = cfg.background.packet_bytes;
    background_.stream = RandomStream(cfg.seed, 1);

    flow_target_base_ = static_cast<std::uint32_t>(topo_.links.size());
    sampler_target_ = flow_target_base_ + cfg.n_flows + 1;
    background_target_ = sampler_target_ + 1;

    engine_.set_dispatcher([this](const SimEvent& ev) { dispatch(ev); });
  }

  SimEngine& engine() { return engine_; }
  const Topology& topology() const { return topo_; }
  const ParallelSession& session() const { return session_; }
  TcpFlow& flow(std::uint32_t i) { return *flows_[i]; }

  using TraceFn = std::function<void(EventKind, SimTime, std::uint32_t)>;
  void set_trace(TraceFn fn) { trace_ = std::move(fn); }

  ScenarioResult run() {
    ScenarioResult result;
    std::vector<SimTime> starts = establishment_times(session_, 0.0);
    for (std::uint32_t k = 0; k < cfg_.n_flows; ++k)
      engine_.schedule(EventKind::FlowStart, starts[k], flow_target_base_ + k);
    if (background_.enabled()) {
      routes_[cfg_.n_flows] = route_index(cfg_.n_flows, 0.0);
      engine_.schedule(EventKind::BackgroundArrival, background_.next_gap(),
                       background_target_);
    }
    if (cfg_.sample_interval_s > 0 &&
        cfg_.sample_interval_s <= cfg_.duration_s)
      engine_.schedule(EventKind::SampleTick, cfg_.sample_interval_s,
                       sampler_target_);

    try {
      result.events_processed = engine_.run_until(cfg_.duration_s);
    } catch (const std::exception& e) {
      result.failed = true;
      std::ostringstream msg;
      msg << "scenario variant=" << cfg_.variant << " n=" << cfg_.n_flows
          << " seed=" << cfg_.seed << ": " << e.what();
      result.fail_reason = msg.str();
      return result;
    }
    finalize(result);
    return result;
  }

  // --- FlowEnv ---

  void send_data(Packet& p) override {
    ++flows_[p.flow_id]->stats().packets_in_flight;
    enter_link(forward_hop(p, 0), p);
  }

  void send_ack(Packet& p) override { enter_link(reverse_hop(p, 0), p); }

  void schedule_rto(std::uint32_t flow_id, SimTime at) override {
    engine_.schedule(EventKind::RtoExpiry, at, flow_target_base_ + flow_id);
  }

  std::uint64_t next_packet_id() override { return next_packet_id_++; }

 private:
  static constexpr std::uint8_t kLastHop = 2;

  std::uint32_t forward_hop(const Packet& p, std::uint8_t hop) const {
    std::uint32_t host = p.flow_id;  // background uses host index n_flows
    switch (hop) {
      case 0: return topo_.sender_access_fwd[host];
      case 1: return topo_.bottleneck_fwd[routes_[host]];
      default: return topo_.receiver_access_fwd[host];
    }
  }

  std::uint32_t reverse_hop(const Packet& p, std::uint8_t hop) const {
    std::uint32_t host = p.flow_id;
    switch (hop) {
      case 0: return topo_.receiver_access_rev[host];
      case 1: return topo_.bottleneck_rev[routes_[host]];
      default: return topo_.sender_access_rev[host];
    }
  }

  void enter_link(std::uint32_t link_id, Packet& p) {
    Link& l = topo_.link(link_id);
    SimTime depart = l.transmit(engine_.now(), p.size_bytes);
    EventKind kind = p.kind == PacketKind::Ack ? EventKind::AckArrival
                                               : EventKind::PacketArrival;
    engine_.schedule(kind, l.delivery_time(depart), link_id, p);
  }

  void dispatch(const SimEvent& ev) {
    if (trace_) trace_(ev.kind, ev.fire_at, ev.target);
    switch (ev.kind) {
      case EventKind::PacketArrival:
        on_data_delivery(ev.payload);
        break;
      case EventKind::AckArrival:
        on_ack_delivery(ev.payload);
        break;
      case EventKind::PacketDeparture:
        topo_.link(ev.target).red().on_departure();
        break;
      case EventKind::RtoExpiry:
        flows_[ev.target - flow_target_base_]->on_rto_event(engine_.now());
        break;
      case EventKind::FlowStart:
        on_flow_start(ev.target - flow_target_base_);
        break;
      case EventKind::SampleTick:
        on_sample_tick(ev.fire_at);
        break;
      case EventKind::BackgroundArrival:
        on_background_arrival();
        break;
    }
  }

  // route_assign names a link id; internally we keep its index into
  // bottleneck_fwd (the reverse twin shares the index).
  std::size_t route_index(std::uint32_t host, SimTime now) const {
    std::uint32_t link_id = route_assign(host, topo_, cfg_.route, now);
    for (std::size_t i = 0; i < topo_.bottleneck_fwd.size(); ++i)
      if (topo_.bottleneck_fwd[i] == link_id) return i;
    return 0;
  }

  void on_flow_start(std::uint32_t idx) {
    routes_[idx] = route_index(idx, engine_.now());
    flows_[idx]->start(engine_.now());
  }

  void on_background_arrival() {
    Packet p;
    p.id = next_packet_id();
    p.flow_id = cfg_.n_flows;  // background host slot
    p.size_bytes = background_.packet_bytes;
    p.kind = PacketKind::Data;
    p.sent_at = engine_.now();
    ++background_in_flight_;
    enter_link(forward_hop(p, 0), p);
    engine_.schedule(EventKind::BackgroundArrival,
                     engine_.now() + background_.next_gap(),
                     background_target_);
  }

  bool is_session_flow(const Packet& p) const { return p.flow_id < cfg_.n_flows; }

  void on_data_delivery(Packet p) {
    if (p.hop == 0) {  // reached R1: bottleneck ingress
      if (try_forced_drop(p)) return;
      std::size_t route = routes_[p.flow_id];
      Link& bn = topo_.link(topo_.bottleneck_fwd[route]);
      RedVerdict verdict = bn.red().enqueue(red_rngs_[route]);
      if (verdict != RedVerdict::Accepted) {
        drop_packet(p);
        return;
      }
      SimTime depart = bn.transmit(engine_.now(), p.size_bytes);
      engine_.schedule(EventKind::PacketDeparture, depart, bn.id());
      p.hop = 1;
      engine_.schedule(EventKind::PacketArrival, bn.delivery_time(depart),
                       bn.id(), p);
    } else if (p.hop == 1) {  // reached R2: receiver access link
      p.hop = 2;
      enter_link(forward_hop(p, 2), p);
    } else {  // delivered to the receiver host
      if (is_session_flow(p)) {
        TcpFlow& f = *flows_[p.flow_id];
        --f.stats().packets_in_flight;
        f.on_data(p, engine_.now());
      } else {
        --background_in_flight_;
        if (engine_.now() >= cfg_.warmup_s)
          background_delivered_window_bits_ += p.size_bytes * 8.0;
      }
    }
  }

  void on_ack_delivery(Packet p) {
    if (p.hop < kLastHop) {
      std::uint8_t next = p.hop + 1;
      p.hop = next;
      enter_link(reverse_hop(p, next), p);
    } else {
      flows_[p.flow_id]->on_ack(p, engine_.now());
    }
  }

  bool try_forced_drop(Packet& p) {
    if (p.kind != PacketKind::Data) return false;
    if (is_session_flow(p)) {
      for (std::size_t i = 0; i < injections_.size(); ++i) {
        if (!injection_done_[i] && injections_[i].flow_id == p.flow_id &&
            engine_.now() >= injections_[i].at) {
          injection_done_[i] = true;
          drop_packet(p);
          return true;
        }
      }
      if (cfg_.loss.uniform_drop_p > 0 &&
          drop_rng_.u01() < cfg_.loss.uniform_drop_p) {
        drop_packet(p);
        return true;
      }
    }
    return false;
  }

  void drop_packet(const Packet& p) {
    if (is_session_flow(p)) {
      TcpFlow& f = *flows_[p.flow_id];
      ++f.stats().drops_observed;
      --f.stats().packets_in_flight;
      if (engine_.now() >= cfg_.warmup_s) ++window_drops_;
    } else {
      --background_in_flight_;
      ++background_drops_;
    }
  }

  void on_sample_tick(SimTime t) {
    if (cfg_.check_invariants) check_conservation(t);
    bool in_window = t >= cfg_.warmup_s;
    if (!warmup_snapped_ && in_window) snapshot_warmup();

    double acw_now = 0;
    double srtt_sum = 0;
    std::size_t srtt_n = 0;
    for (std::uint32_t i = 0; i < cfg_.n_flows; ++i) {
      TcpFlow& f = *flows_[i];
      if (!f.started()) continue;
      acw_now += f.window();
      if (f.cc().srtt > 0) {
        srtt_sum += f.cc().srtt;
        ++srtt_n;
      }
      if (cfg_.record_series) {
        const Link& bn = topo_.link(topo_.bottleneck_fwd[routes_[i]]);
        double goodput =
            static_cast<double>(f.stats().bytes_delivered - last_bytes_[i]) *
            8.0 / cfg_.sample_interval_s;
        series_.push_back(SeriesPoint{t, i, goodput, f.window(),
                                      bn.red().occupancy(), bn.red().avg()});
      }
      last_bytes_[i] = f.stats().bytes_delivered;
    }
    if (in_window && t > cfg_.warmup_s) {
      // Ticks strictly inside the measurement window.
      acw_sum_ += acw_now;
      ++acw_ticks_;
      if (srtt_n > 0) {
        srtt_tick_sum_ += srtt_sum / static_cast<double>(srtt_n);
        ++srtt_ticks_;
      }
    }
    SimTime next = t + cfg_.sample_interval_s;
    if (next <= cfg_.duration_s + 1e-9)
      engine_.schedule(EventKind::SampleTick, next, sampler_target_);
  }

  void snapshot_warmup() {
    warmup_snapped_ = true;
    for (std::uint32_t i = 0; i < cfg_.n_flows; ++i) {
      const FlowStats& s = flows_[i]->stats();
      snap_delivered_[i] = s.bytes_delivered;
      snap_sent_ += s.data_packets_sent;
      snap_retx_ += s.retransmissions;
      snap_events_ += flows_[i]->recovery_count() + flows_[i]->rto_count();
    }
  }

  void check_conservation(SimTime t) {
    for (std::uint32_t i = 0; i < cfg_.n_flows; ++i) {
      const FlowStats& s = flows_[i]->stats();
      std::int64_t lhs = static_cast<std::int64_t>(s.data_packets_sent);
      std::int64_t rhs = static_cast<std::int64_t>(s.arrivals_at_receiver) +
                         static_cast<std::int64_t>(s.drops_observed) +
                         s.packets_in_flight;
      if (lhs != rhs || s.packets_in_flight < 0) {
        std::ostringstream msg;
        msg << "conservation violated at t=" << t << " flow=" << i
            << ": sent=" << s.data_packets_sent
            << " arrived=" << s.arrivals_at_receiver
            << " dropped=" << s.drops_observed
            << " in_flight=" << s.packets_in_flight;
        throw std::logic_error(msg.str());
      }
    }
  }

  void finalize(ScenarioResult& r) {
    double window = cfg_.duration_s - cfg_.warmup_s;
    double cap_total = 0;
    for (auto id : topo_.bottleneck_fwd) cap_total += topo_.link(id).capacity_bps();

    std::uint64_t sent = 0, retx = 0, events = 0;
    double tcp_window_bits = 0;
    for (std::uint32_t i = 0; i < cfg_.n_flows; ++i) {
      const FlowStats& s = flows_[i]->stats();
      sent += s.data_packets_sent;
      retx += s.retransmissions;
      events += flows_[i]->recovery_count() + flows_[i]->rto_count();
      r.rto_total += flows_[i]->rto_count();
      double bits =
          static_cast<double>(s.bytes_delivered - snap_delivered_[i]) * 8.0;
      tcp_window_bits += bits;
      r.per_flow_goodput_bps.push_back(bits / window);
    }
    r.retransmissions = retx - snap_retx_;
    std::uint64_t sent_window = sent - snap_sent_;
    r.loss_ratio = loss_ratio(r.retransmissions, sent_window);
    r.loss_events = events - snap_events_;
    r.loss_event_rate =
        sent_window > 0
            ? static_cast<double>(r.loss_events) / static_cast<double>(sent_window)
            : 0.0;
    // Session utilization is the exact sum of the per-flow contributions.
    r.utilization_tcp = utilization(tcp_window_bits, cap_total, window);
    r.utilization = utilization(
        tcp_window_bits + background_delivered_window_bits_, cap_total, window);
    bool any_positive = false;
    for (double g : r.per_flow_goodput_bps) any_positive |= g > 0;
    r.jfi = any_positive ? jfi(r.per_flow_goodput_bps) : 0.0;
    r.acw_mean = acw_ticks_ > 0 ? acw_sum_ / static_cast<double>(acw_ticks_) : 0;
    r.srtt_mean =
        srtt_ticks_ > 0 ? srtt_tick_sum_ / static_cast<double>(srtt_ticks_) : 0;
    r.drops = window_drops_;
    r.background_drops = background_drops_;
    r.series = std::move(series_);
    r.rtt_base = base_rtt();
  }

  double base_rtt() const {
    const Link& acc = topo_.link(topo_.sender_access_fwd[0]);
    const Link& bn = topo_.link(topo_.bottleneck_fwd[0]);
    double fwd = acc.serialization_time(cfg_.tcp.mss_bytes) + acc.prop_delay_s() +
                 bn.serialization_time(cfg_.tcp.mss_bytes) + bn.prop_delay_s() +
                 acc.serialization_time(cfg_.tcp.mss_bytes) + acc.prop_delay_s();
    double rev = 2.0 * (acc.serialization_time(kAckBytes) + acc.prop_delay_s()) +
                 bn.serialization_time(kAckBytes) + bn.prop_delay_s();
    return fwd + rev;
  }

  ScenarioConfig cfg_;
  Topology topo_;
  SimEngine engine_;
  ParallelSession session_;
  std::vector<std::unique_ptr<TcpFlow>> flows_;
  std::vector<std::size_t> routes_;  // per host: bottleneck index
  std::vector<RandomStream> red_rngs_;
  RandomStream drop_rng_;
  PoissonSource background_;
  std::vector<LossInjection> injections_;
  std::vector<bool> injection_done_;

  std::uint32_t flow_target_base_ = 0;
  std::uint32_t sampler_target_ = 0;
  std::uint32_t background_target_ = 0;
  std::uint64_t next_packet_id_ = 0;

  // Measurement-window accumulators.
  bool warmup_snapped_ = false;
  std::vector<std::uint64_t> snap_delivered_;
  std::vector<std::uint64_t> last_bytes_;
  std::uint64_t snap_sent_ = 0;
  std::uint64_t snap_retx_ = 0;
  std::uint64_t snap_events_ = 0;
  double background_delivered_window_bits_ = 0;
  std::uint64_t window_drops_ = 0;
  std::uint64_t background_drops_ = 0;
  std::int64_t background_in_flight_ = 0;
  double acw_sum_ = 0;
  std::uint64_t acw_ticks_ = 0;
  double srtt_tick_sum_ = 0;
  std::uint64_t srtt_ticks_ = 0;
  std::vector<SeriesPoint> series_;
  TraceFn trace_;
};

// Convenience: build and run one scenario.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  Simulation sim(cfg);
  return sim.run();
}

}  // namespace ptcpsim
