#include <gtest/gtest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "ptcpsim/sim/scenario.hpp"

using namespace ptcpsim;

namespace {

ScenarioConfig quick_config(const char* variant, std::uint32_t n,
                            double duration = 60, double warmup = 10) {
  ScenarioConfig cfg;
  cfg.variant = variant;
  cfg.n_flows = n;
  cfg.duration_s = duration;
  cfg.warmup_s = warmup;
  cfg.seed = 7;
  return cfg;
}

using Trace = std::vector<std::tuple<int, SimTime, std::uint32_t>>;

Trace traced_run(const ScenarioConfig& cfg, ScenarioResult* out = nullptr) {
  Trace trace;
  Simulation sim(cfg);
  sim.set_trace([&](EventKind k, SimTime t, std::uint32_t target) {
    trace.emplace_back(static_cast<int>(k), t, target);
  });
  ScenarioResult r = sim.run();
  EXPECT_FALSE(r.failed) << r.fail_reason;
  if (out) *out = r;
  return trace;
}

TEST(Scenario, ReplayDeterminism) {
  ScenarioConfig cfg = quick_config("cubic", 3, 40, 5);
  ScenarioResult r1, r2;
  Trace t1 = traced_run(cfg, &r1);
  Trace t2 = traced_run(cfg, &r2);
  ASSERT_EQ(t1.size(), t2.size());
  EXPECT_TRUE(t1 == t2);  // kind, time, target: bit-exact
  EXPECT_EQ(r1.utilization, r2.utilization);
  EXPECT_EQ(r1.loss_ratio, r2.loss_ratio);
  EXPECT_EQ(r1.jfi, r2.jfi);
  EXPECT_EQ(r1.events_processed, r2.events_processed);
}

TEST(Scenario, DifferentSeedsDiverge) {
  ScenarioConfig cfg = quick_config("newreno", 2, 30, 5);
  ScenarioResult r1 = run_scenario(cfg);
  cfg.seed = 8;
  ScenarioResult r2 = run_scenario(cfg);
  EXPECT_NE(r1.events_processed, r2.events_processed);
}

TEST(Scenario, ConservationHoldsEveryTick) {
  // check_invariants is on: any violation aborts the scenario.
  for (const char* v : {"newreno", "scalable", "htcp", "hstcp", "cubic"}) {
    ScenarioConfig cfg = quick_config(v, 5, 45, 5);
    ScenarioResult r = run_scenario(cfg);
    EXPECT_FALSE(r.failed) << v << ": " << r.fail_reason;
  }
}

TEST(Scenario, SampleCountMatchesDurationOverInterval) {
  ScenarioConfig cfg = quick_config("newreno", 1, 50, 10);
  ScenarioResult r = run_scenario(cfg);
  // Ticks at 1..50 inclusive, one row per started flow.
  EXPECT_EQ(r.series.size(), 50u);
  SimTime last = 0;
  for (const auto& p : r.series) {
    EXPECT_GT(p.t, last);
    last = p.t;
  }
}

TEST(Scenario, QueueNeverExceedsBuffer) {
  ScenarioConfig cfg = quick_config("scalable", 12, 60, 10);
  ScenarioResult r = run_scenario(cfg);
  for (const auto& p : r.series) {
    EXPECT_LE(p.queue_len, 300u);
    EXPECT_GE(p.queue_avg, 0.0);
  }
}

TEST(Scenario, BottleneckDeliveryRateBoundedByCapacity) {
  // Physical deliveries out of the bottleneck in any one-second window are
  // capped by capacity plus one packet of slack.
  ScenarioConfig cfg = quick_config("cubic", 8, 60, 10);
  Simulation sim(cfg);
  std::uint32_t bn_id = sim.topology().bottleneck_fwd[0];
  std::vector<SimTime> deliveries;
  sim.set_trace([&](EventKind k, SimTime t, std::uint32_t target) {
    if (k == EventKind::PacketArrival && target == bn_id) deliveries.push_back(t);
  });
  ScenarioResult r = sim.run();
  ASSERT_FALSE(r.failed);
  double max_bits = 10e6 * 1.0 + 8000;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < deliveries.size(); ++hi) {
    while (deliveries[hi] - deliveries[lo] > 1.0) ++lo;
    EXPECT_LE((hi - lo + 1) * 8000.0, max_bits + 8000.0);
  }
}

TEST(Scenario, UtilizationWithinBounds) {
  ScenarioConfig cfg = quick_config("htcp", 6, 60, 10);
  ScenarioResult r = run_scenario(cfg);
  EXPECT_GE(r.utilization, 0.0);
  EXPECT_LE(r.utilization, 1.0);
  EXPECT_LE(r.utilization_tcp, r.utilization + 1e-12);
}

TEST(Scenario, AggregateUtilizationIsSumOfPerFlowContributions) {
  ScenarioConfig cfg = quick_config("newreno", 5, 60, 10);
  ScenarioResult r = run_scenario(cfg);
  double sum = 0;
  for (double g : r.per_flow_goodput_bps) sum += g / 10e6;
  EXPECT_NEAR(r.utilization_tcp, sum, 1e-9);
}

TEST(Scenario, AcwSeriesMatchesPerFlowSum) {
  ScenarioConfig cfg = quick_config("cubic", 3, 30, 5);
  ScenarioResult r = run_scenario(cfg);
  auto samples = acw_series(r.series);
  ASSERT_FALSE(samples.empty());
  for (const auto& s : samples) {
    EXPECT_DOUBLE_EQ(s.acw, acw(s.per_flow));
    EXPECT_LE(s.per_flow.size(), 3u);
  }
}

TEST(Scenario, TenFlowsBeatOneFlow) {
  ScenarioConfig one = quick_config("newreno", 1, 120, 30);
  ScenarioConfig ten = quick_config("newreno", 10, 120, 30);
  ScenarioResult r1 = run_scenario(one);
  ScenarioResult r10 = run_scenario(ten);
  EXPECT_LT(r1.utilization, r10.utilization);
  EXPECT_GT(r10.utilization, 0.8);
}

TEST(Scenario, JfiWithinBounds) {
  ScenarioConfig cfg = quick_config("cubic", 10, 90, 30);
  ScenarioResult r = run_scenario(cfg);
  EXPECT_GE(r.jfi, 0.1 - 1e-12);
  EXPECT_LE(r.jfi, 1.0 + 1e-12);
  EXPECT_EQ(r.per_flow_goodput_bps.size(), 10u);
}

TEST(Scenario, RequiresAtLeastOneFlow) {
  ScenarioConfig cfg = quick_config("newreno", 0);
  EXPECT_THROW(Simulation sim(cfg), std::invalid_argument);
}

TEST(Scenario, RejectsWarmupBeyondDuration) {
  ScenarioConfig cfg = quick_config("newreno", 1, 50, 60);
  EXPECT_THROW(Simulation sim(cfg), std::invalid_argument);
}

TEST(Scenario, UniformForcedDropsCauseRetransmissions) {
  ScenarioConfig cfg = quick_config("newreno", 1, 120, 20);
  cfg.background.rate_pps = 0;
  cfg.link.bottleneck_bps = 100e6;  // uncongested
  cfg.loss.uniform_drop_p = 1e-3;
  ScenarioResult r = run_scenario(cfg);
  EXPECT_GT(r.retransmissions, 0u);
  EXPECT_GT(r.drops, 0u);
  EXPECT_NEAR(r.loss_ratio, 1e-3, 8e-4);
}

TEST(Scenario, InjectionDropsExactlyOnePacket) {
  ScenarioConfig cfg = quick_config("cubic", 1, 40, 5);
  cfg.background.rate_pps = 0;
  cfg.link.bottleneck_bps = 100e6;
  cfg.red.buffer_capacity = 10000;  // no organic queue drops
  cfg.red.min_th = 9000;
  cfg.red.max_th = 9999;
  cfg.tcp.max_cwnd = 2000;  // below pipe capacity: no slow-start overshoot
  cfg.loss.injections.push_back(LossInjection{0, 20.0});
  ScenarioResult r = run_scenario(cfg);
  EXPECT_EQ(r.drops, 1u);
  EXPECT_EQ(r.retransmissions, 1u);
}

TEST(Scenario, MultiRouteSpreadsFlowsAcrossLinks) {
  ScenarioConfig cfg = quick_config("cubic", 3, 30, 5);
  cfg.link.bottleneck_count = 3;
  cfg.background.rate_pps = 0;
  Simulation sim(cfg);
  ScenarioResult r = sim.run();
  EXPECT_FALSE(r.failed);
  // With utilization-weighted assignment and staggered starts, each flow
  // lands on its own link, so per-flow goodput is symmetric.
  ASSERT_EQ(r.per_flow_goodput_bps.size(), 3u);
  double g0 = r.per_flow_goodput_bps[0];
  for (double g : r.per_flow_goodput_bps) EXPECT_NEAR(g, g0, 0.05 * g0);
}

TEST(Scenario, MultiRouteIndependenceUnderInjection) {
  // Three cubic flows on three dedicated links; a forced loss on flow 0
  // must leave flows 1 and 2 bit-identical to the control run.
  ScenarioConfig control = quick_config("cubic", 3, 60, 5);
  control.link.bottleneck_count = 3;
  control.background.rate_pps = 0;
  ScenarioConfig injected = control;
  injected.loss.injections.push_back(LossInjection{0, 30.0});

  ScenarioResult rc = run_scenario(control);
  ScenarioResult ri = run_scenario(injected);
  ASSERT_FALSE(rc.failed);
  ASSERT_FALSE(ri.failed);

  auto cwnd_series = [](const ScenarioResult& r, std::uint32_t flow) {
    std::vector<double> out;
    for (const auto& p : r.series)
      if (p.flow_id == flow) out.push_back(p.cwnd);
    return out;
  };
  EXPECT_EQ(cwnd_series(rc, 1), cwnd_series(ri, 1));  // bit-exact
  EXPECT_EQ(cwnd_series(rc, 2), cwnd_series(ri, 2));
  EXPECT_NE(cwnd_series(rc, 0), cwnd_series(ri, 0));  // the injected flow
}

TEST(Scenario, AcwMeanTracksAggregateWindow) {
  ScenarioConfig cfg = quick_config("newreno", 4, 60, 10);
  ScenarioResult r = run_scenario(cfg);
  EXPECT_GT(r.acw_mean, 4.0);  // at least initial windows
  // Cross-check against the series.
  double total = 0;
  std::uint64_t ticks = 0;
  std::vector<double> acc;
  for (const auto& p : r.series) {
    if (p.t <= 10.0) continue;
    if (acc.empty() || p.flow_id == 0) {
      acc.push_back(0);
      ++ticks;
    }
    acc.back() += p.cwnd;
  }
  for (double a : acc) total += a;
  EXPECT_NEAR(r.acw_mean, total / static_cast<double>(ticks), 1e-9);
}

}  // namespace
