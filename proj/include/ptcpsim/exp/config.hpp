#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptcpsim/sim/scenario.hpp"

namespace ptcpsim {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Full experiment: a matrix of scenarios (variant x flow count x repetition)
// sharing one network/parameter template. Defaults reproduce the headline
// table-scale setup.
struct ExperimentConfig {
  std::vector<std::string> variants{"newreno", "scalable", "htcp", "hstcp",
                                    "cubic"};
  std::vector<std::uint32_t> flow_counts{1, 5, 10, 15, 20, 25, 30};
  double duration_s = 1000;
  double warmup_s = 100;
  double sample_interval_s = 1.0;
  double stagger_s = 0.2;
  std::uint64_t seed = 42;
  std::uint32_t repetitions = 1;
  bool record_series = true;
  LinkConfig link;
  RedParams red;
  BackgroundConfig background;
  FlowConfig tcp;
  RoutePolicy route;
  VariantParams variant_params;
  LossConfig loss;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Flat key-value view of an INI document: "section.key" -> value.
class IniDoc {
 public:
  explicit IniDoc(const std::string& text) {
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::size_t cut = line.find_first_of("#;");
      if (cut != std::string::npos) line = line.substr(0, cut);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          fail(line_no, "unterminated section header: " + line);
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        fail(line_no, "expected key = value, got: " + line);
      std::string key = trim(line.substr(0, eq));
      if (key.empty()) fail(line_no, "empty key");
      std::string full = section.empty() ? key : section + "." + key;
      if (values_.count(full)) fail(line_no, "duplicate key: " + full);
      values_[full] = trim(line.substr(eq + 1));
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string raw(const std::string& key) const {
    consumed_.insert(key);
    return values_.at(key);
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = raw(key);
    try {
      std::size_t pos = 0;
      double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': not a number: " + v);
    }
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = raw(key);
    try {
      if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
      std::size_t pos = 0;
      std::uint64_t out = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': not an unsigned integer: " + v);
    }
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = raw(key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': not a boolean: " + v);
  }

  std::vector<std::string> list(const std::string& key) const {
    return split(raw(key), ',');
  }

  // Keys present in the document but never consumed are typos.
  void check_all_consumed() const {
    for (const auto& [key, value] : values_)
      if (!consumed_.count(key))
        throw ConfigError("unknown key '" + key + "'");
  }

 private:
  [[noreturn]] static void fail(int line_no, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line_no << ": " << what;
    throw ConfigError(msg.str());
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

inline void require_positive(double v, const std::string& key) {
  if (!(v > 0)) throw ConfigError("key '" + key + "': must be positive");
}

inline void require_non_negative(double v, const std::string& key) {
  if (v < 0) throw ConfigError("key '" + key + "': must be non-negative");
}

}  // namespace detail

// Parses the INI experiment document; an empty document yields the full
// table-scale defaults. Errors name the offending key.
inline ExperimentConfig parse_config(const std::string& text) {
  using detail::IniDoc;
  IniDoc doc(text);
  ExperimentConfig cfg;

  if (doc.has("variants")) {
    cfg.variants = doc.list("variants");
    if (cfg.variants.empty()) throw ConfigError("key 'variants': empty list");
    for (const auto& v : cfg.variants)
      if (!is_known_variant(v))
        throw ConfigError("key 'variants': unknown variant name '" + v + "'");
  }
  if (doc.has("flow_counts")) {
    cfg.flow_counts.clear();
    for (const auto& item : doc.list("flow_counts")) {
      try {
        std::size_t pos = 0;
        long n = std::stol(item, &pos);
        if (pos != item.size() || n < 1) throw std::invalid_argument(item);
        cfg.flow_counts.push_back(static_cast<std::uint32_t>(n));
      } catch (const std::exception&) {
        throw ConfigError("key 'flow_counts': entries must be integers >= 1, got '" +
                          item + "'");
      }
    }
    if (cfg.flow_counts.empty())
      throw ConfigError("key 'flow_counts': empty list");
  }

  cfg.duration_s = doc.number("duration", cfg.duration_s);
  detail::require_positive(cfg.duration_s, "duration");
  cfg.warmup_s = doc.number("warmup", cfg.warmup_s);
  detail::require_non_negative(cfg.warmup_s, "warmup");
  if (cfg.warmup_s >= cfg.duration_s)
    throw ConfigError("key 'warmup': must be smaller than duration");
  cfg.sample_interval_s = doc.number("sample_interval", cfg.sample_interval_s);
  detail::require_positive(cfg.sample_interval_s, "sample_interval");
  cfg.stagger_s = doc.number("stagger", cfg.stagger_s);
  detail::require_non_negative(cfg.stagger_s, "stagger");
  cfg.seed = doc.unsigned_int("seed", cfg.seed);
  cfg.repetitions =
      static_cast<std::uint32_t>(doc.unsigned_int("repetitions", cfg.repetitions));
  if (cfg.repetitions == 0)
    throw ConfigError("key 'repetitions': must be >= 1");
  cfg.record_series = doc.boolean("output.series", cfg.record_series);

  cfg.link.access_bps = doc.number("link.access_bps", cfg.link.access_bps);
  detail::require_positive(cfg.link.access_bps, "link.access_bps");
  cfg.link.access_delay_s = doc.number("link.access_delay", cfg.link.access_delay_s);
  detail::require_non_negative(cfg.link.access_delay_s, "link.access_delay");
  cfg.link.bottleneck_bps =
      doc.number("link.bottleneck_bps", cfg.link.bottleneck_bps);
  detail::require_positive(cfg.link.bottleneck_bps, "link.bottleneck_bps");
  cfg.link.bottleneck_delay_s =
      doc.number("link.bottleneck_delay", cfg.link.bottleneck_delay_s);
  detail::require_non_negative(cfg.link.bottleneck_delay_s, "link.bottleneck_delay");
  cfg.link.bottleneck_count = static_cast<std::uint32_t>(
      doc.unsigned_int("link.bottleneck_count", cfg.link.bottleneck_count));
  if (cfg.link.bottleneck_count == 0)
    throw ConfigError("key 'link.bottleneck_count': must be >= 1");
  cfg.link.bottleneck_cost =
      doc.number("link.bottleneck_cost", cfg.link.bottleneck_cost);

  cfg.red.enabled = doc.boolean("red.enabled", cfg.red.enabled);
  cfg.red.buffer_capacity = static_cast<std::uint32_t>(
      doc.unsigned_int("red.buffer_pkts", cfg.red.buffer_capacity));
  if (cfg.red.buffer_capacity == 0)
    throw ConfigError("key 'red.buffer_pkts': must be >= 1");
  cfg.red.min_th = doc.number("red.min_th", cfg.red.min_th);
  cfg.red.max_th = doc.number("red.max_th", cfg.red.max_th);
  cfg.red.max_p = doc.number("red.max_p", cfg.red.max_p);
  cfg.red.w_q = doc.number("red.w_q", cfg.red.w_q);
  if (!(cfg.red.min_th > 0) || !(cfg.red.min_th < cfg.red.max_th) ||
      !(cfg.red.max_th <= cfg.red.buffer_capacity))
    throw ConfigError("key 'red.min_th': need 0 < min_th < max_th <= buffer_pkts");
  if (!(cfg.red.max_p > 0 && cfg.red.max_p <= 1))
    throw ConfigError("key 'red.max_p': must be in (0, 1]");
  if (!(cfg.red.w_q > 0 && cfg.red.w_q <= 1))
    throw ConfigError("key 'red.w_q': must be in (0, 1]");

  cfg.background.rate_pps =
      doc.number("background.rate_pps", cfg.background.rate_pps);
  detail::require_non_negative(cfg.background.rate_pps, "background.rate_pps");
  cfg.background.packet_bytes = static_cast<std::uint32_t>(
      doc.unsigned_int("background.packet_bytes", cfg.background.packet_bytes));
  if (cfg.background.packet_bytes == 0)
    throw ConfigError("key 'background.packet_bytes': must be >= 1");

  cfg.tcp.mss_bytes =
      static_cast<std::uint32_t>(doc.unsigned_int("tcp.mss_bytes", cfg.tcp.mss_bytes));
  if (cfg.tcp.mss_bytes == 0) throw ConfigError("key 'tcp.mss_bytes': must be >= 1");
  cfg.tcp.initial_cwnd = doc.number("tcp.initial_cwnd", cfg.tcp.initial_cwnd);
  if (cfg.tcp.initial_cwnd < 1)
    throw ConfigError("key 'tcp.initial_cwnd': must be >= 1");
  cfg.tcp.initial_ssthresh =
      doc.number("tcp.initial_ssthresh", cfg.tcp.initial_ssthresh);
  detail::require_positive(cfg.tcp.initial_ssthresh, "tcp.initial_ssthresh");
  cfg.tcp.rto_min_s = doc.number("tcp.rto_min", cfg.tcp.rto_min_s);
  detail::require_positive(cfg.tcp.rto_min_s, "tcp.rto_min");
  cfg.tcp.rto_max_s = doc.number("tcp.rto_max", cfg.tcp.rto_max_s);
  if (cfg.tcp.rto_max_s < cfg.tcp.rto_min_s)
    throw ConfigError("key 'tcp.rto_max': must be >= tcp.rto_min");
  cfg.tcp.max_cwnd = doc.number("tcp.max_cwnd", cfg.tcp.max_cwnd);
  if (cfg.tcp.max_cwnd < 1) throw ConfigError("key 'tcp.max_cwnd': must be >= 1");

  cfg.route.w_utilization = doc.number("route.w_utilization", cfg.route.w_utilization);
  cfg.route.w_delay = doc.number("route.w_delay", cfg.route.w_delay);
  cfg.route.w_distance = doc.number("route.w_distance", cfg.route.w_distance);
  cfg.route.w_cost = doc.number("route.w_cost", cfg.route.w_cost);
  for (double w : {cfg.route.w_utilization, cfg.route.w_delay,
                   cfg.route.w_distance, cfg.route.w_cost})
    detail::require_non_negative(w, "route weights");
  if (cfg.route.weight_sum() <= 0)
    throw ConfigError("key 'route.w_utilization': route weights must sum to a positive value");

  VariantParams& vp = cfg.variant_params;
  vp.stcp_a = doc.number("variant.scalable.a", vp.stcp_a);
  vp.stcp_b = doc.number("variant.scalable.b", vp.stcp_b);
  vp.stcp_legacy_window =
      doc.number("variant.scalable.legacy_window", vp.stcp_legacy_window);
  if (!(vp.stcp_a > 0 && vp.stcp_a < 1))
    throw ConfigError("key 'variant.scalable.a': must be in (0, 1)");
  if (!(vp.stcp_b > 0 && vp.stcp_b < 1))
    throw ConfigError("key 'variant.scalable.b': must be in (0, 1)");
  vp.hstcp_low_window = doc.number("variant.hstcp.low_window", vp.hstcp_low_window);
  vp.hstcp_high_window = doc.number("variant.hstcp.high_window", vp.hstcp_high_window);
  vp.hstcp_high_p = doc.number("variant.hstcp.high_p", vp.hstcp_high_p);
  vp.hstcp_high_decrease =
      doc.number("variant.hstcp.high_decrease", vp.hstcp_high_decrease);
  vp.htcp_delta_l = doc.number("variant.htcp.delta_l", vp.htcp_delta_l);
  vp.htcp_beta_min = doc.number("variant.htcp.beta_min", vp.htcp_beta_min);
  vp.htcp_beta_max = doc.number("variant.htcp.beta_max", vp.htcp_beta_max);
  vp.cubic_c = doc.number("variant.cubic.c", vp.cubic_c);
  vp.cubic_beta = doc.number("variant.cubic.beta", vp.cubic_beta);
  vp.cubic_tcp_friendly =
      doc.boolean("variant.cubic.tcp_friendly", vp.cubic_tcp_friendly);
  vp.cubic_fast_convergence =
      doc.boolean("variant.cubic.fast_convergence", vp.cubic_fast_convergence);

  cfg.loss.uniform_drop_p = doc.number("loss.uniform_drop_p", cfg.loss.uniform_drop_p);
  if (cfg.loss.uniform_drop_p < 0 || cfg.loss.uniform_drop_p >= 1)
    throw ConfigError("key 'loss.uniform_drop_p': must be in [0, 1)");
  if (doc.has("loss.injections")) {
    for (const auto& item : doc.list("loss.injections")) {
      std::size_t colon = item.find(':');
      if (colon == std::string::npos)
        throw ConfigError("key 'loss.injections': expected flow:time, got '" +
                          item + "'");
      try {
        LossInjection inj;
        inj.flow_id = static_cast<std::uint32_t>(std::stoul(item.substr(0, colon)));
        inj.at = std::stod(item.substr(colon + 1));
        cfg.loss.injections.push_back(inj);
      } catch (const std::exception&) {
        throw ConfigError("key 'loss.injections': malformed entry '" + item + "'");
      }
    }
  }

  doc.check_all_consumed();
  return cfg;
}

// Serializes a fully-defaulted config; parse_config(render_config(c))
// round-trips. Doubles as the emitted metadata file so every constant in
// force is recorded with the results.
inline std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  auto join_variants = [&] {
    std::string s;
    for (std::size_t i = 0; i < cfg.variants.size(); ++i)
      s += (i ? ", " : "") + cfg.variants[i];
    return s;
  };
  std::string counts;
  for (std::size_t i = 0; i < cfg.flow_counts.size(); ++i)
    counts += (i ? ", " : "") + std::to_string(cfg.flow_counts[i]);

  out << "variants = " << join_variants() << "\n";
  out << "flow_counts = " << counts << "\n";
  out << "duration = " << cfg.duration_s << "\n";
  out << "warmup = " << cfg.warmup_s << "\n";
  out << "sample_interval = " << cfg.sample_interval_s << "\n";
  out << "stagger = " << cfg.stagger_s << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "repetitions = " << cfg.repetitions << "\n\n";

  out << "[link]\n";
  out << "access_bps = " << cfg.link.access_bps << "\n";
  out << "access_delay = " << cfg.link.access_delay_s << "\n";
  out << "bottleneck_bps = " << cfg.link.bottleneck_bps << "\n";
  out << "bottleneck_delay = " << cfg.link.bottleneck_delay_s << "\n";
  out << "bottleneck_count = " << cfg.link.bottleneck_count << "\n";
  out << "bottleneck_cost = " << cfg.link.bottleneck_cost << "\n\n";

  out << "[red]\n";
  out << "enabled = " << (cfg.red.enabled ? "true" : "false") << "\n";
  out << "buffer_pkts = " << cfg.red.buffer_capacity << "\n";
  out << "min_th = " << cfg.red.min_th << "\n";
  out << "max_th = " << cfg.red.max_th << "\n";
  out << "max_p = " << cfg.red.max_p << "\n";
  out << "w_q = " << cfg.red.w_q << "\n\n";

  out << "[background]\n";
  out << "rate_pps = " << cfg.background.rate_pps << "\n";
  out << "packet_bytes = " << cfg.background.packet_bytes << "\n\n";

  out << "[tcp]\n";
  out << "mss_bytes = " << cfg.tcp.mss_bytes << "\n";
  out << "initial_cwnd = " << cfg.tcp.initial_cwnd << "\n";
  out << "initial_ssthresh = " << cfg.tcp.initial_ssthresh << "\n";
  out << "rto_min = " << cfg.tcp.rto_min_s << "\n";
  out << "rto_max = " << cfg.tcp.rto_max_s << "\n";
  out << "max_cwnd = " << cfg.tcp.max_cwnd << "\n\n";

  out << "[route]\n";
  out << "w_utilization = " << cfg.route.w_utilization << "\n";
  out << "w_delay = " << cfg.route.w_delay << "\n";
  out << "w_distance = " << cfg.route.w_distance << "\n";
  out << "w_cost = " << cfg.route.w_cost << "\n\n";

  const VariantParams& vp = cfg.variant_params;
  out << "[variant.scalable]\n";
  out << "a = " << vp.stcp_a << "\n";
  out << "b = " << vp.stcp_b << "\n";
  out << "legacy_window = " << vp.stcp_legacy_window << "\n\n";
  out << "[variant.hstcp]\n";
  out << "low_window = " << vp.hstcp_low_window << "\n";
  out << "high_window = " << vp.hstcp_high_window << "\n";
  out << "high_p = " << vp.hstcp_high_p << "\n";
  out << "high_decrease = " << vp.hstcp_high_decrease << "\n\n";
  out << "[variant.htcp]\n";
  out << "delta_l = " << vp.htcp_delta_l << "\n";
  out << "beta_min = " << vp.htcp_beta_min << "\n";
  out << "beta_max = " << vp.htcp_beta_max << "\n\n";
  out << "[variant.cubic]\n";
  out << "c = " << vp.cubic_c << "\n";
  out << "beta = " << vp.cubic_beta << "\n";
  out << "tcp_friendly = " << (vp.cubic_tcp_friendly ? "true" : "false") << "\n";
  out << "fast_convergence = " << (vp.cubic_fast_convergence ? "true" : "false")
      << "\n\n";

  out << "[loss]\n";
  out << "uniform_drop_p = " << cfg.loss.uniform_drop_p << "\n";
  if (!cfg.loss.injections.empty()) {
    out << "injections = ";
    for (std::size_t i = 0; i < cfg.loss.injections.size(); ++i) {
      if (i) out << ", ";
      out << cfg.loss.injections[i].flow_id << ":" << cfg.loss.injections[i].at;
    }
    out << "\n";
  }
  out << "\n[output]\n";
  out << "series = " << (cfg.record_series ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace ptcpsim
