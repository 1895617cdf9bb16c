#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ptcpsim/net/link.hpp"

namespace ptcpsim {

// Table-scale defaults: 100 Mbps access, 10 Mbps bottleneck, 100 ms one-way
// bottleneck propagation (BDP = 125000 bytes at 1000-byte packets).
struct LinkConfig {
  double access_bps = 100e6;
  double access_delay_s = 0;
  double bottleneck_bps = 10e6;
  double bottleneck_delay_s = 0.1;
  std::uint32_t bottleneck_count = 1;  // >1 exercises multi-route assignment
  double bottleneck_cost = 1.0;
};

// Weighted route-selection criteria: utilization, delay, hop distance, cost.
struct RoutePolicy {
  double w_utilization = 1.0;
  double w_delay = 0;
  double w_distance = 0;
  double w_cost = 0;

  double weight_sum() const {
    return w_utilization + w_delay + w_distance + w_cost;
  }
};

// Dumbbell: senders -> R1 -> (one or more bottleneck links) -> R2 ->
// receivers. Every host has a dedicated access link in each direction; the
// reverse path is loss-free. Links live in one flat registry so link ids can
// double as event targets.
struct Topology {
  std::vector<Link> links;
  // Indices into links, one entry per sender/receiver pair.
  std::vector<std::uint32_t> sender_access_fwd;   // sender -> R1
  std::vector<std::uint32_t> sender_access_rev;   // R1 -> sender (acks)
  std::vector<std::uint32_t> receiver_access_fwd; // R2 -> receiver
  std::vector<std::uint32_t> receiver_access_rev; // receiver -> R2 (acks)
  std::vector<std::uint32_t> bottleneck_fwd;      // R1 -> R2, RED-managed
  std::vector<std::uint32_t> bottleneck_rev;      // R2 -> R1, loss-free

  std::size_t num_hosts() const { return sender_access_fwd.size(); }

  Link& link(std::uint32_t id) { return links[id]; }
  const Link& link(std::uint32_t id) const { return links[id]; }
};

// Builds the dumbbell for n_hosts sender/receiver pairs. RED is installed on
// the forward bottleneck queues only; every other link is a plain FIFO.
inline Topology build_dumbbell(const LinkConfig& cfg, const RedParams& red,
                               std::size_t n_hosts) {
  if (cfg.access_bps <= 0 || cfg.bottleneck_bps <= 0)
    throw std::invalid_argument("link capacities must be positive");
  if (cfg.access_delay_s < 0 || cfg.bottleneck_delay_s < 0)
    throw std::invalid_argument("link delays must be non-negative");
  if (cfg.bottleneck_count == 0)
    throw std::invalid_argument("at least one bottleneck link is required");

  Topology topo;
  auto add_link = [&](double bps, double delay, double cost) {
    std::uint32_t id = static_cast<std::uint32_t>(topo.links.size());
    topo.links.emplace_back(id, bps, delay, cost);
    return id;
  };

  for (std::uint32_t i = 0; i < cfg.bottleneck_count; ++i) {
    std::uint32_t fwd =
        add_link(cfg.bottleneck_bps, cfg.bottleneck_delay_s, cfg.bottleneck_cost);
    topo.links[fwd].install_red(red);
    topo.bottleneck_fwd.push_back(fwd);
    topo.bottleneck_rev.push_back(
        add_link(cfg.bottleneck_bps, cfg.bottleneck_delay_s, cfg.bottleneck_cost));
  }
  for (std::size_t i = 0; i < n_hosts; ++i) {
    topo.sender_access_fwd.push_back(
        add_link(cfg.access_bps, cfg.access_delay_s, 1.0));
    topo.sender_access_rev.push_back(
        add_link(cfg.access_bps, cfg.access_delay_s, 1.0));
    topo.receiver_access_fwd.push_back(
        add_link(cfg.access_bps, cfg.access_delay_s, 1.0));
    topo.receiver_access_rev.push_back(
        add_link(cfg.access_bps, cfg.access_delay_s, 1.0));
  }
  return topo;
}

// Picks the forward bottleneck link minimizing the weighted score; ties go to
// the lowest link id. The assignment is fixed for the flow's lifetime.
inline std::uint32_t route_assign(std::uint32_t /*flow_id*/, const Topology& topo,
                                  const RoutePolicy& policy, SimTime now) {
  if (topo.bottleneck_fwd.empty())
    throw std::invalid_argument("topology has no bottleneck link");
  if (policy.weight_sum() <= 0)
    throw std::invalid_argument("route policy weights must sum to a positive value");

  std::uint32_t best = topo.bottleneck_fwd.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < topo.bottleneck_fwd.size(); ++i) {
    const Link& l = topo.link(topo.bottleneck_fwd[i]);
    double score = policy.w_utilization * l.utilization(now) +
                   policy.w_delay * l.prop_delay_s() +
                   policy.w_distance * 1.0 +  // all routes are one hop
                   policy.w_cost * l.cost();
    if (score < best_score) {
      best_score = score;
      best = l.id();
    }
  }
  return best;
}

}  // namespace ptcpsim
