// Acceptance suite: runs the full evaluation the simulator exists for and
// prints one PASS/FAIL line per criterion. Returns nonzero if any criterion
// fails. Expect a few minutes of wall-clock at full table scale.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ptcpsim/ptcpsim.hpp"

using namespace ptcpsim;

namespace {

struct Reporter {
  int failed = 0;

  void line(int id, bool ok, const std::string& what) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id,
                what.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream out;
  out.precision(prec);
  out << v;
  return out.str();
}

// --- criterion 1: unit laws ---

struct LawCheck {
  int total = 0;
  std::vector<std::string> failures;

  void expect(const std::string& label, double got, double want, double tol) {
    ++total;
    if (!(std::abs(got - want) <= tol))
      failures.push_back(label + ": got " + fmt(got, 12) + " want " +
                         fmt(want, 12));
  }
  void expect_true(const std::string& label, bool ok) {
    ++total;
    if (!ok) failures.push_back(label);
  }
};

bool criterion1(Reporter& rep) {
  LawCheck c;

  // Eq. 1: aggregated congestion window.
  std::vector<double> w{0.16, 0.33, 0.33};
  c.expect("acw worked example", acw(w), 0.82, 1e-9);
  c.expect("acw empty", acw(std::vector<double>{}), 0.0, 1e-12);
  c.expect("acw identity", acw(std::vector<double>{7.0}), 7.0, 1e-12);

  // Eq. 2: reduction.
  c.expect("reduction worked example", reduction(1.0, 0.82), 0.18, 1e-9);
  c.expect("reduction equal", reduction(4.0, 4.0), 0.0, 1e-12);
  c.expect("reduction collapse", reduction(5.0, 0.0), 1.0, 1e-12);

  // Eq. 3: Jain's fairness index.
  c.expect("jfi equal", jfi(std::vector<double>{5, 5, 5}), 1.0, 1e-9);
  c.expect("jfi hog", jfi(std::vector<double>{7, 0, 0}), 1.0 / 3.0, 1e-9);
  double jfi_expected = 0.82 * 0.82 / (3.0 * (0.16 * 0.16 + 2 * 0.33 * 0.33));
  c.expect("jfi worked example", jfi(w), jfi_expected, 1e-9);

  // Mathis estimate.
  MathisInputs mi{1000, 0.1, 1e-4, std::sqrt(1.5)};
  double mathis_expected = std::sqrt(1.5) * 8000.0 / (0.1 * 0.01);
  c.expect("mathis closed form", mathis_estimate(mi), mathis_expected,
           1e-9 * mathis_expected);
  MathisInputs mi4{1000, 0.1, 4e-4, std::sqrt(1.5)};
  c.expect("mathis quarter", mathis_estimate(mi) / mathis_estimate(mi4), 2.0,
           1e-9);

  // Parallelism threshold arithmetic.
  c.expect_true("threshold 10/1", parallelism_threshold(10e6, 1e6) == 10);
  c.expect_true("threshold 10/3", parallelism_threshold(10e6, 3e6) == 4);
  c.expect_true("threshold >=", parallelism_threshold(10e6, 20e6) == 1);

  // HS-TCP response function.
  auto [a38, b38] = hstcp_ab(38.0);
  c.expect("hstcp a(38)", a38, 1.0, 1e-6);
  c.expect("hstcp b(38)", b38, 0.5, 1e-6);
  auto [a_hi, b_hi] = hstcp_ab(83000.0);
  c.expect("hstcp b(83000)", b_hi, 0.1, 1e-6);
  c.expect("hstcp a(83000)", a_hi, 72.5157894736842, 1e-6 * 72.5157894736842);
  auto [a10, b10] = hstcp_ab(10.0);
  c.expect("hstcp a(10) newreno", a10, 1.0, 1e-9);
  c.expect("hstcp b(10) newreno", b10, 0.5, 1e-9);

  // H-TCP alpha polynomial.
  c.expect("htcp alpha(2)", htcp_alpha(2.0), 11.25, 1e-9);
  c.expect("htcp alpha continuity", htcp_alpha(1.0 + 1e-12), 1.0, 1e-6);
  c.expect("htcp alpha legacy", htcp_alpha(0.5), 1.0, 1e-12);

  // Per-ACK growth laws.
  {
    CcState s;
    s.cwnd = 10;
    s.ssthresh = 2;
    s.phase = CcPhase::CongestionAvoidance;
    NewRenoLaw nr;
    c.expect("newreno CA 10 -> 10.1", s.cwnd + nr.ack_increment(s, 0), 10.1,
             1e-9);
    ScalableLaw st;
    CcState s2 = s;
    s2.cwnd = 100;
    c.expect("scalable 100 -> 100.01", s2.cwnd + st.ack_increment(s2, 0),
             100.01, 1e-9);
  }

  // Decrease factors at cwnd = 200.
  {
    auto ratio = [](const char* name) {
      auto law = make_cc_law(name);
      CcState s;
      s.cwnd = 200;
      s.ssthresh = 2;
      s.phase = CcPhase::CongestionAvoidance;
      return law->loss_cwnd(s, 1.0) / s.cwnd;
    };
    c.expect("newreno decrease 0.5", ratio("newreno"), 0.5, 1e-9);
    c.expect("scalable decrease 0.875", ratio("scalable"), 0.875, 1e-9);
    c.expect("hstcp decrease 1-b(w)", ratio("hstcp"), 1.0 - hstcp_b(200.0),
             1e-9);
    c.expect("cubic decrease 0.8", ratio("cubic"), 0.8, 1e-9);
    double r = ratio("htcp");
    c.expect_true("htcp decrease in [0.5, 0.8]",
                  r >= 0.5 - 1e-9 && r <= 0.8 + 1e-9);
  }

  // CUBIC K and continuity at the loss point.
  {
    CubicLaw law;
    CcState s;
    s.cwnd = 100;
    s.ssthresh = 2;
    s.phase = CcPhase::CongestionAvoidance;
    double after = law.loss_cwnd(s, 5.0);
    c.expect("cubic K = cbrt(50)", law.k(), 3.6840314986403863, 1e-9);
    c.expect("cubic W(K) = w_max", law.window_target(5.0 + law.k()), 100.0,
             1e-9);
    c.expect("cubic W(0) continuity", law.window_target(5.0), after, 1e-9);
  }

  // NewReno halving example.
  {
    auto law = make_cc_law("newreno");
    CcState s;
    s.cwnd = 20;
    s.phase = CcPhase::CongestionAvoidance;
    c.expect("newreno cwnd 20 -> 10", law->loss_cwnd(s, 0.0), 10.0, 1e-9);
  }

  std::ostringstream what;
  what << "unit laws: " << c.total - static_cast<int>(c.failures.size()) << "/"
       << c.total << " checks";
  for (const auto& f : c.failures) what << "; FAILED " << f;
  rep.line(1, c.failures.empty(), what.str());
  return c.failures.empty();
}

std::map<std::string, std::map<std::uint32_t, std::vector<RunRecord>>> by_cell(
    const std::vector<RunRecord>& records) {
  std::map<std::string, std::map<std::uint32_t, std::vector<RunRecord>>> out;
  for (const auto& r : records) out[r.variant][r.n].push_back(r);
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

int main() {
  Reporter rep;
  std::printf("ptcpsim acceptance suite\n");

  criterion1(rep);

  // --- criterion 2: determinism and runtime targets ---
  std::vector<RunRecord> full_records;
  {
    ExperimentConfig reduced;
    reduced.duration_s = 100;
    reduced.warmup_s = 10;
    reduced.record_series = false;
    auto t0 = std::chrono::steady_clock::now();
    std::string csv_a = render_summary_csv(run_matrix(reduced));
    double t_first = elapsed_s(t0);
    auto t1 = std::chrono::steady_clock::now();
    std::string csv_b = render_summary_csv(run_matrix(reduced));
    double t_second = elapsed_s(t1);

    ExperimentConfig full;  // table-scale defaults
    full.record_series = false;
    auto t2 = std::chrono::steady_clock::now();
    full_records = run_matrix(full);
    std::string csv_full_a = render_summary_csv(full_records);
    double t_full_a = elapsed_s(t2);
    auto t3 = std::chrono::steady_clock::now();
    std::string csv_full_b = render_summary_csv(run_matrix(full));
    double t_full_b = elapsed_s(t3);

    bool identical = csv_a == csv_b && csv_full_a == csv_full_b;
    bool fast_reduced = t_first < 60.0 && t_second < 60.0;
    bool fast_full = t_full_a < 600.0 && t_full_b < 600.0;
    std::ostringstream what;
    what << "determinism: reduced + full 35-cell matrices byte-identical="
         << (identical ? "yes" : "NO") << "; reduced " << fmt(t_first, 3)
         << "s/" << fmt(t_second, 3) << "s (<60s), full " << fmt(t_full_a, 3)
         << "s/" << fmt(t_full_b, 3) << "s (<600s)";
    rep.line(2, identical && fast_reduced && fast_full, what.str());
  }

  auto cells = by_cell(full_records);

  // --- criterion 3: saturation ---
  {
    bool ok = true;
    std::ostringstream what;
    what << "saturation:";
    for (const auto& [variant, by_n] : cells) {
      double u1 = by_n.at(1).front().utilization;
      double u10 = by_n.at(10).front().utilization;
      bool v_ok = u10 >= 0.90 && u1 < u10;
      for (std::uint32_t n : {15u, 20u, 25u, 30u})
        v_ok = v_ok && by_n.at(n).front().utilization >= 0.90;
      ok = ok && v_ok;
      what << ' ' << variant << "(u1=" << fmt(u1, 3) << ",u10=" << fmt(u10, 3)
           << (v_ok ? ")" : ") VIOLATION");
    }
    rep.line(3, ok, what.str());
  }

  // --- multi-seed sweep shared by criteria 4, 6 and 9 ---
  ExperimentConfig sweep;
  sweep.flow_counts = {10, 15, 20, 25, 30};
  sweep.repetitions = 7;  // >= 5 seeds per (variant, n)
  sweep.record_series = false;
  auto t_sweep = std::chrono::steady_clock::now();
  auto sweep_records = run_matrix(sweep);
  std::printf("  (multi-seed sweep: %zu cells in %.1fs)\n",
              sweep_records.size(), elapsed_s(t_sweep));
  auto sweep_cells = by_cell(sweep_records);

  std::map<std::string, double> avg_loss, avg_jfi;
  for (const auto& [variant, by_n] : sweep_cells) {
    std::vector<double> losses, jfis;
    for (const auto& [n, recs] : by_n)
      for (const auto& r : recs) {
        losses.push_back(r.loss_ratio);
        jfis.push_back(r.jfi);
      }
    avg_loss[variant] = mean(losses);
    avg_jfi[variant] = mean(jfis);
  }

  // --- criterion 4: loss ordering ---
  {
    double scal = avg_loss["scalable"], htcp = avg_loss["htcp"],
           hstcp = avg_loss["hstcp"], cubic = avg_loss["cubic"],
           newreno = avg_loss["newreno"];
    bool ok = scal > htcp && scal > hstcp && std::max(cubic, newreno) < scal;
    std::ostringstream what;
    what << "loss ordering over n{10..30} x 7 seeds: scalable=" << fmt(scal)
         << " htcp=" << fmt(htcp) << " hstcp=" << fmt(hstcp)
         << " cubic=" << fmt(cubic) << " newreno=" << fmt(newreno)
         << " (test-bed reference magnitudes ~0.16 vs ~0.13: reported only,"
         << " not asserted)";
    rep.line(4, ok, what.str());
  }

  // --- criterion 5: low-loss regime at n in {1, 5} ---
  {
    bool ok = true;
    std::ostringstream what;
    what << "low-loss regime (<0.02):";
    for (const auto& [variant, by_n] : cells)
      for (std::uint32_t n : {1u, 5u}) {
        double lr = by_n.at(n).front().loss_ratio;
        if (lr >= 0.02) ok = false;
        what << ' ' << variant << "/n" << n << "=" << fmt(lr, 3);
      }
    rep.line(5, ok, what.str());
  }

  // --- criterion 6: fairness band ---
  {
    bool band_ok = true;
    double min_jfi = 1.0, min_jfi_small_n = 1.0;
    auto scan = [&](const std::vector<RunRecord>& records) {
      for (const auto& r : records) {
        min_jfi = std::min(min_jfi, r.jfi);
        if (r.n <= 10) min_jfi_small_n = std::min(min_jfi_small_n, r.jfi);
        if (r.jfi < 0.90 || (r.n <= 10 && r.jfi < 0.98)) band_ok = false;
      }
    };
    scan(full_records);
    scan(sweep_records);
    bool cubic_vs_newreno = avg_jfi["cubic"] >= avg_jfi["newreno"];
    std::ostringstream what;
    what << "fairness: min JFI=" << fmt(min_jfi, 5)
         << ", min JFI(n<=10)=" << fmt(min_jfi_small_n, 5)
         << ", avg JFI cubic=" << fmt(avg_jfi["cubic"], 6)
         << " vs newreno=" << fmt(avg_jfi["newreno"], 6);
    rep.line(6, band_ok && cubic_vs_newreno, what.str());
  }

  // --- criterion 7: parallel independence under forced loss ---
  {
    ScenarioConfig base;
    base.variant = "cubic";
    base.n_flows = 3;
    base.duration_s = 400;
    base.warmup_s = 50;
    base.seed = 42;
    base.link.bottleneck_count = 3;  // one route per flow
    base.background.rate_pps = 0;
    base.tcp.max_cwnd = 1e6;  // windows limited by congestion control only
    ScenarioConfig injected = base;
    injected.loss.injections.push_back(LossInjection{0, 300.0});

    ScenarioResult control = run_scenario(base);
    ScenarioResult forced = run_scenario(injected);

    auto cwnd_of = [](const ScenarioResult& r, std::uint32_t flow) {
      std::vector<double> out;
      for (const auto& p : r.series)
        if (p.flow_id == flow) out.push_back(p.cwnd);
      return out;
    };
    bool siblings_exact = cwnd_of(control, 1) == cwnd_of(forced, 1) &&
                          cwnd_of(control, 2) == cwnd_of(forced, 2);
    bool target_diverges = cwnd_of(control, 0) != cwnd_of(forced, 0);

    // Eq. 2 at the injection instant: prediction from the pre-loss windows,
    // measurement from the sampled ACW across the event.
    std::vector<AcwSample> acw_samples = acw_series(forced.series);
    double acw_pre = 0, acw_post = 0, cw0_pre = 0;
    for (const auto& s : acw_samples) {
      if (s.t == 300.0) {
        acw_pre = s.acw;
        cw0_pre = s.per_flow.at(0);
      }
      if (s.t == 301.0) acw_post = s.acw;
    }
    double predicted = reduction(acw_pre, acw_pre - 0.2 * cw0_pre);
    double measured = reduction(acw_pre, std::min(acw_post, acw_pre));
    bool reduction_ok =
        predicted > 0 && std::abs(measured - predicted) <= 0.2 * predicted;

    std::ostringstream what;
    what << "independence: siblings exact=" << (siblings_exact ? "yes" : "NO")
         << ", injected flow diverges=" << (target_diverges ? "yes" : "NO")
         << ", ACW reduction measured=" << fmt(measured)
         << " vs Eq.2 predicted=" << fmt(predicted) << " (cw0=" << fmt(cw0_pre)
         << ")";
    rep.line(7, siblings_exact && target_diverges && reduction_ok, what.str());
  }

  // --- criterion 8: Mathis inverse-sqrt property ---
  {
    std::vector<double> ks, ratios;
    std::ostringstream what;
    what << "mathis:";
    for (double p : {1e-4, 4e-4, 1.6e-3}) {
      ScenarioConfig cfg;
      cfg.variant = "newreno";
      cfg.n_flows = 1;
      cfg.duration_s = 1000;
      cfg.warmup_s = 100;
      cfg.seed = 11;
      cfg.link.bottleneck_bps = 100e6;  // uncongested
      cfg.background.rate_pps = 0;
      cfg.tcp.max_cwnd = 1e6;
      cfg.tcp.initial_ssthresh = 200;
      cfg.loss.uniform_drop_p = p;
      cfg.record_series = false;
      ScenarioResult r = run_scenario(cfg);
      double goodput = r.per_flow_goodput_bps[0];
      double estimate =
          mathis_estimate(MathisInputs{1000, r.rtt_base, p, std::sqrt(1.5)});
      ks.push_back(goodput * std::sqrt(p));
      ratios.push_back(goodput / estimate);
      what << " p=" << fmt(p, 2) << ":(goodput*sqrt(p)=" << fmt(ks.back(), 4)
           << ",vs_est=" << fmt(ratios.back(), 3) << ")";
    }
    double k_spread = *std::max_element(ks.begin(), ks.end()) /
                      *std::min_element(ks.begin(), ks.end());
    bool ok = k_spread <= 1.5;
    for (double r : ratios) ok = ok && r <= 2.0 && r >= 0.5;
    what << " spread=" << fmt(k_spread, 3) << " (<=1.5)";
    rep.line(8, ok, what.str());
  }

  // --- criterion 9: parallelism threshold consistency ---
  {
    // Mathis inputs from the n=30 NewReno cells: the loss-event rate (the
    // model's p counts one loss event per cycle) and the 100 ms table delay.
    std::vector<double> event_rates, goodputs;
    for (const auto& r : sweep_cells["newreno"][30]) {
      event_rates.push_back(r.loss_event_rate);
      goodputs.push_back(r.utilization_tcp * 10e6 / 30.0);
    }
    double p = mean(event_rates);
    double estimate =
        mathis_estimate(MathisInputs{1000, 0.1, p, std::sqrt(1.5)});
    std::uint32_t n_star = parallelism_threshold(10e6, estimate);
    bool ok = n_star >= 8 && n_star <= 12;
    std::ostringstream what;
    what << "threshold: n=30 mean per-flow goodput="
         << fmt(mean(goodputs) / 1e6, 3) << " Mbps, loss-event rate="
         << fmt(p, 4) << ", Mathis estimate=" << fmt(estimate / 1e6, 3)
         << " Mbps -> N*=" << n_star << " (band [8,12])";
    rep.line(9, ok, what.str());
  }

  // --- criterion 10: randomized conservation fuzz ---
  {
    RandomStream rng(987654321u, 0);
    int failures = 0;
    std::string first_failure;
    for (int trial = 0; trial < 100; ++trial) {
      ScenarioConfig cfg;
      cfg.variant = std::string(kVariantNames[rng.below(5)]);
      cfg.n_flows = 1 + rng.below(30);
      cfg.duration_s = 60;
      cfg.warmup_s = 10;
      cfg.seed = rng.next_u64();
      cfg.record_series = false;
      cfg.check_invariants = true;  // conservation asserted at every tick
      ScenarioResult r = run_scenario(cfg);
      bool ok = !r.failed && r.utilization >= 0.0 && r.utilization <= 1.0;
      if (r.jfi > 0)
        ok = ok && r.jfi >= 1.0 / cfg.n_flows - 1e-9 && r.jfi <= 1.0 + 1e-9;
      if (!ok) {
        ++failures;
        if (first_failure.empty())
          first_failure = cfg.variant + "/n" + std::to_string(cfg.n_flows) +
                          (r.failed ? ": " + r.fail_reason : ": bounds");
      }
    }
    std::ostringstream what;
    what << "conservation fuzz: 100 randomized 60s scenarios, " << failures
         << " failures";
    if (!first_failure.empty()) what << " (first: " << first_failure << ")";
    rep.line(10, failures == 0, what.str());
  }

  std::printf("%d criterion(s) failed\n", rep.failed);
  return rep.failed == 0 ? 0 : 1;
}
