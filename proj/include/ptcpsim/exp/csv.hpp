#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptcpsim/exp/matrix.hpp"

namespace ptcpsim {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Real numbers render with six significant digits, trailing zeros kept
// (1.0 -> "1.00000").
inline std::string fmt_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.6g", v);
  return buf;
}

inline constexpr const char* kSummaryHeader =
    "variant,n,rep,seed,utilization,loss_ratio,jfi,acw_mean,drops,retransmissions";

inline constexpr const char* kSeriesHeader =
    "t,flow_id,goodput_bps,cwnd,queue_len,queue_avg";

// summary.csv: one row per record, already sorted by (variant, n, rep).
inline std::string render_summary_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << kSummaryHeader << "\n";
  for (const auto& r : records) {
    out << r.variant << ',' << r.n << ',' << r.rep << ',' << r.seed << ','
        << fmt_g6(r.utilization) << ',' << fmt_g6(r.loss_ratio) << ','
        << fmt_g6(r.jfi) << ',' << fmt_g6(r.acw_mean) << ',' << r.drops << ','
        << r.retransmissions << "\n";
  }
  return out.str();
}

// Per-scenario series rows arrive sorted by (t, flow_id) from the sampler.
inline std::string render_series_csv(const std::vector<SeriesPoint>& series) {
  std::ostringstream out;
  out << kSeriesHeader << "\n";
  for (const auto& p : series) {
    out << fmt_g6(p.t) << ',' << p.flow_id << ',' << fmt_g6(p.goodput_bps) << ','
        << fmt_g6(p.cwnd) << ',' << p.queue_len << ',' << fmt_g6(p.queue_avg)
        << "\n";
  }
  return out.str();
}

inline std::string series_file_name(const std::string& variant, std::uint32_t n,
                                    std::uint32_t rep) {
  return "series_" + variant + "_" + std::to_string(n) + "_" +
         std::to_string(rep) + ".csv";
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses a summary.csv back into records (the plot subcommand's input).
// Only the summary columns are recovered.
inline std::vector<RunRecord> parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw IoError("summary.csv: empty file");
  if (line != kSummaryHeader)
    throw IoError("summary.csv: unexpected header: " + line);
  std::vector<RunRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 10) {
      std::ostringstream msg;
      msg << "summary.csv line " << line_no << ": expected 10 fields, got "
          << fields.size();
      throw IoError(msg.str());
    }
    try {
      RunRecord r;
      r.variant = fields[0];
      r.n = static_cast<std::uint32_t>(std::stoul(fields[1]));
      r.rep = static_cast<std::uint32_t>(std::stoul(fields[2]));
      r.seed = std::stoull(fields[3]);
      r.utilization = std::stod(fields[4]);
      r.loss_ratio = std::stod(fields[5]);
      r.jfi = std::stod(fields[6]);
      r.acw_mean = std::stod(fields[7]);
      r.drops = std::stoull(fields[8]);
      r.retransmissions = std::stoull(fields[9]);
      records.push_back(std::move(r));
    } catch (const std::exception&) {
      std::ostringstream msg;
      msg << "summary.csv line " << line_no << ": malformed row";
      throw IoError(msg.str());
    }
  }
  return records;
}

}  // namespace ptcpsim
