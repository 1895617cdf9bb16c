#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ptcpsim/exp/config.hpp"
#include "ptcpsim/sim/scenario.hpp"

namespace ptcpsim {

// One completed matrix cell. Series data is streamed to the sink during the
// run rather than retained here.
struct RunRecord {
  std::string variant;
  std::uint32_t n = 0;
  std::uint32_t rep = 0;
  std::uint64_t seed = 0;
  double utilization = 0;
  double loss_ratio = 0;
  double jfi = 0;
  double acw_mean = 0;
  std::uint64_t drops = 0;
  std::uint64_t retransmissions = 0;
  // Cross-check extras, not part of the summary row schema.
  double utilization_tcp = 0;
  std::uint64_t loss_events = 0;
  double loss_event_rate = 0;
  double srtt_mean = 0;
  double rtt_base = 0;
  std::uint64_t rto_total = 0;
  bool failed = false;
  std::string fail_reason;
};

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Per-cell seed: master ^ hash(variant, n, rep). Any cell is reproducible in
// isolation, and removing one cell never changes another's record.
inline std::uint64_t cell_seed(std::uint64_t master, const std::string& variant,
                               std::uint32_t n, std::uint32_t rep) {
  return master ^ fnv1a64(variant + ":" + std::to_string(n) + ":" +
                          std::to_string(rep));
}

inline ScenarioConfig make_scenario(const ExperimentConfig& exp,
                                    const std::string& variant, std::uint32_t n,
                                    std::uint32_t rep) {
  ScenarioConfig cfg;
  cfg.variant = variant;
  cfg.n_flows = n;
  cfg.duration_s = exp.duration_s;
  cfg.warmup_s = exp.warmup_s;
  cfg.sample_interval_s = exp.sample_interval_s;
  cfg.stagger_s = exp.stagger_s;
  cfg.link = exp.link;
  cfg.red = exp.red;
  cfg.background = exp.background;
  cfg.tcp = exp.tcp;
  cfg.route = exp.route;
  cfg.variant_params = exp.variant_params;
  cfg.loss = exp.loss;
  cfg.seed = cell_seed(exp.seed, variant, n, rep);
  cfg.record_series = exp.record_series;
  return cfg;
}

using CellSink =
    std::function<void(const RunRecord&, const std::vector<SeriesPoint>&)>;

// Runs every (variant x flow_count x repetition) cell. Cells are mutually
// independent engines and may execute concurrently; records come back in
// deterministic (variant, n, rep) order regardless of completion order. A
// scenario fault marks its record failed and the matrix continues.
inline std::vector<RunRecord> run_matrix(const ExperimentConfig& exp,
                                         unsigned jobs = 1,
                                         const CellSink& sink = nullptr) {
  struct Cell {
    std::string variant;
    std::uint32_t n;
    std::uint32_t rep;
  };
  std::vector<Cell> cells;
  for (const auto& v : exp.variants)
    for (std::uint32_t n : exp.flow_counts)
      for (std::uint32_t rep = 0; rep < exp.repetitions; ++rep)
        cells.push_back(Cell{v, n, rep});

  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      ScenarioConfig cfg = make_scenario(exp, cell.variant, cell.n, cell.rep);
      ScenarioResult result = run_scenario(cfg);
      RunRecord rec;
      rec.variant = cell.variant;
      rec.n = cell.n;
      rec.rep = cell.rep;
      rec.seed = cfg.seed;
      rec.failed = result.failed;
      rec.fail_reason = result.fail_reason;
      if (!result.failed) {
        rec.utilization = result.utilization;
        rec.loss_ratio = result.loss_ratio;
        rec.jfi = result.jfi;
        rec.acw_mean = result.acw_mean;
        rec.drops = result.drops;
        rec.retransmissions = result.retransmissions;
        rec.utilization_tcp = result.utilization_tcp;
        rec.loss_events = result.loss_events;
        rec.loss_event_rate = result.loss_event_rate;
        rec.srtt_mean = result.srtt_mean;
        rec.rtt_base = result.rtt_base;
        rec.rto_total = result.rto_total;
      }
      if (sink) {
        std::lock_guard<std::mutex> lock(sink_mutex);
        sink(rec, result.series);
      }
      records[i] = std::move(rec);
    }
  };

  unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              return std::tie(a.variant, a.n, a.rep) <
                     std::tie(b.variant, b.n, b.rep);
            });
  return records;
}

}  // namespace ptcpsim
