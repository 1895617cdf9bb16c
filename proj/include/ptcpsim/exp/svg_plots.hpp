#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ptcpsim/exp/csv.hpp"
#include "ptcpsim/exp/matrix.hpp"

namespace ptcpsim {

// Standalone SVG renderings of the five result figures: utilization, loss
// and fairness against the connection count, plus per-variant averages of
// loss and fairness as bars.

namespace svg {

inline constexpr int kWidth = 640;
inline constexpr int kHeight = 440;
inline constexpr int kMarginLeft = 70;
inline constexpr int kMarginRight = 160;
inline constexpr int kMarginTop = 40;
inline constexpr int kMarginBottom = 60;

inline const char* color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#ff7f0e", "#9467bd", "#8c564b"};
  return palette[i % 6];
}

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

inline double nice_ceil(double v) {
  if (v <= 0) return 1.0;
  double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (v <= m * mag * (1 + 1e-12)) return m * mag;
  return 10 * mag;
}

class Canvas {
 public:
  Canvas(std::string title, std::string x_label, std::string y_label,
         double x_min, double x_max, double y_min, double y_max)
      : title_(std::move(title)), x_label_(std::move(x_label)),
        y_label_(std::move(y_label)), x_min_(x_min), x_max_(x_max),
        y_min_(y_min), y_max_(y_max) {
    body_.precision(6);
  }

  double px(double x) const {
    return kMarginLeft + (x - x_min_) / (x_max_ - x_min_) *
                             (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom - (y - y_min_) / (y_max_ - y_min_) *
                                         (kHeight - kMarginTop - kMarginBottom);
  }

  void polyline(const Series& s, const char* stroke) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      body_ << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    body_ << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      body_ << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
            << "\" r=\"3\" fill=\"" << stroke << "\"/>\n";
  }

  void bar(double x_center, double half_width, double y, const char* fill) {
    double x0 = px(x_center - half_width);
    double x1 = px(x_center + half_width);
    double y0 = py(y);
    double y1 = py(y_min_);
    body_ << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0
          << "\" height=\"" << y1 - y0 << "\" fill=\"" << fill << "\"/>\n";
  }

  void x_tick(double x, const std::string& label) {
    double p = px(x);
    body_ << "<line x1=\"" << p << "\" y1=\"" << py(y_min_) << "\" x2=\"" << p
          << "\" y2=\"" << py(y_min_) + 5 << "\" stroke=\"#333\"/>\n";
    body_ << "<text x=\"" << p << "\" y=\"" << py(y_min_) + 20
          << "\" text-anchor=\"middle\" font-size=\"12\">" << label
          << "</text>\n";
  }

  void y_tick(double y, const std::string& label) {
    double p = py(y);
    body_ << "<line x1=\"" << px(x_min_) - 5 << "\" y1=\"" << p << "\" x2=\""
          << px(x_min_) << "\" y2=\"" << p << "\" stroke=\"#333\"/>\n";
    body_ << "<line x1=\"" << px(x_min_) << "\" y1=\"" << p << "\" x2=\""
          << px(x_max_) << "\" y2=\"" << p
          << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    body_ << "<text x=\"" << px(x_min_) - 10 << "\" y=\"" << p + 4
          << "\" text-anchor=\"end\" font-size=\"12\">" << label << "</text>\n";
  }

  void legend_entry(std::size_t index, const std::string& label,
                    const char* fill) {
    double x = kWidth - kMarginRight + 16;
    double y = kMarginTop + 10 + 22.0 * index;
    body_ << "<rect x=\"" << x << "\" y=\"" << y - 9
          << "\" width=\"14\" height=\"14\" fill=\"" << fill << "\"/>\n";
    body_ << "<text x=\"" << x + 20 << "\" y=\"" << y + 3
          << "\" font-size=\"13\">" << label << "</text>\n";
  }

  std::string finish() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-size=\"16\" font-weight=\"bold\">" << title_ << "</text>\n";
    // Axes.
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kHeight - kMarginBottom
        << "\" x2=\"" << kWidth - kMarginRight << "\" y2=\""
        << kHeight - kMarginBottom << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << kHeight - kMarginBottom
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\""
        << kHeight - 15 << "\" text-anchor=\"middle\" font-size=\"14\">"
        << x_label_ << "</text>\n";
    out << "<text x=\"18\" y=\"" << (kMarginTop + kHeight - kMarginBottom) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << (kMarginTop + kHeight - kMarginBottom) / 2 << ")\">" << y_label_
        << "</text>\n";
    out << body_.str();
    out << "</svg>\n";
    return out.str();
  }

 private:
  std::string title_, x_label_, y_label_;
  double x_min_, x_max_, y_min_, y_max_;
  std::ostringstream body_;
};

inline std::string line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series, double y_max) {
  double x_min = 1e300, x_max = -1e300;
  for (const auto& s : series)
    for (double x : s.x) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
    }
  if (x_min >= x_max) {
    x_min -= 1;
    x_max += 1;
  }
  Canvas c(title, x_label, y_label, x_min, x_max, 0.0, y_max);
  for (int i = 0; i <= 5; ++i) {
    double y = y_max * i / 5.0;
    std::ostringstream lab;
    lab.precision(4);
    lab << y;
    c.y_tick(y, lab.str());
  }
  for (const auto& s : series)
    for (double x : s.x) {
      std::ostringstream lab;
      lab << x;
      c.x_tick(x, lab.str());
    }
  for (std::size_t i = 0; i < series.size(); ++i) {
    c.polyline(series[i], color(i));
    c.legend_entry(i, series[i].label, color(i));
  }
  return c.finish();
}

inline std::string bar_chart(const std::string& title, const std::string& y_label,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& values, double y_max) {
  Canvas c(title, "TCP variant", y_label, -0.6,
           static_cast<double>(labels.size()) - 0.4, 0.0, y_max);
  for (int i = 0; i <= 5; ++i) {
    double y = y_max * i / 5.0;
    std::ostringstream lab;
    lab.precision(4);
    lab << y;
    c.y_tick(y, lab.str());
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    c.bar(static_cast<double>(i), 0.3, values[i], color(i));
    c.x_tick(static_cast<double>(i), labels[i]);
    c.legend_entry(i, labels[i], color(i));
  }
  return c.finish();
}

}  // namespace svg

namespace detail {

// Mean of a per-(variant, n) metric across repetitions.
inline std::map<std::string, svg::Series> per_variant_series(
    const std::vector<RunRecord>& records, double RunRecord::*field) {
  std::map<std::string, std::map<std::uint32_t, std::pair<double, int>>> acc;
  for (const auto& r : records) {
    if (r.failed) continue;
    auto& cell = acc[r.variant][r.n];
    cell.first += r.*field;
    cell.second += 1;
  }
  std::map<std::string, svg::Series> out;
  for (const auto& [variant, by_n] : acc) {
    svg::Series s;
    s.label = variant;
    for (const auto& [n, sum_count] : by_n) {
      s.x.push_back(n);
      s.y.push_back(sum_count.first / sum_count.second);
    }
    out[variant] = std::move(s);
  }
  return out;
}

inline std::pair<std::vector<std::string>, std::vector<double>> per_variant_mean(
    const std::vector<RunRecord>& records, double RunRecord::*field) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& r : records) {
    if (r.failed) continue;
    acc[r.variant].first += r.*field;
    acc[r.variant].second += 1;
  }
  std::vector<std::string> labels;
  std::vector<double> values;
  for (const auto& [variant, sum_count] : acc) {
    labels.push_back(variant);
    values.push_back(sum_count.first / sum_count.second);
  }
  return {labels, values};
}

}  // namespace detail

inline const std::vector<std::string>& plot_file_names() {
  static const std::vector<std::string> names = {
      "utilization_vs_n.svg", "loss_vs_n.svg", "loss_avg_bar.svg",
      "jfi_vs_n.svg", "jfi_avg_bar.svg"};
  return names;
}

// Writes the five figures into dir. Errors if there is nothing to plot.
inline void emit_plots(const std::vector<RunRecord>& records,
                       const std::string& dir) {
  std::size_t usable = 0;
  for (const auto& r : records)
    if (!r.failed) ++usable;
  if (usable == 0) throw IoError("emit_plots: no records to plot");

  auto to_vec = [](std::map<std::string, svg::Series> m) {
    std::vector<svg::Series> v;
    for (auto& [name, s] : m) v.push_back(std::move(s));
    return v;
  };

  auto util = to_vec(detail::per_variant_series(records, &RunRecord::utilization));
  write_file(dir + "/utilization_vs_n.svg",
             svg::line_chart("Bandwidth utilization vs. number of connections",
                             "Number of connections", "Utilization (fraction)",
                             util, 1.0));

  auto loss = to_vec(detail::per_variant_series(records, &RunRecord::loss_ratio));
  double loss_max = 0;
  for (const auto& s : loss)
    for (double y : s.y) loss_max = std::max(loss_max, y);
  write_file(dir + "/loss_vs_n.svg",
             svg::line_chart("Loss ratio vs. number of connections",
                             "Number of connections", "Loss ratio (fraction)",
                             loss, svg::nice_ceil(loss_max * 1.2)));

  auto [loss_labels, loss_means] =
      detail::per_variant_mean(records, &RunRecord::loss_ratio);
  double bar_max = 0;
  for (double v : loss_means) bar_max = std::max(bar_max, v);
  write_file(dir + "/loss_avg_bar.svg",
             svg::bar_chart("Average loss ratio per TCP variant",
                            "Loss ratio (fraction)", loss_labels, loss_means,
                            svg::nice_ceil(bar_max * 1.2)));

  auto jfi_series = to_vec(detail::per_variant_series(records, &RunRecord::jfi));
  write_file(dir + "/jfi_vs_n.svg",
             svg::line_chart("Fairness index vs. number of connections",
                             "Number of connections", "Jain's fairness index",
                             jfi_series, 1.0));

  auto [jfi_labels, jfi_means] = detail::per_variant_mean(records, &RunRecord::jfi);
  write_file(dir + "/jfi_avg_bar.svg",
             svg::bar_chart("Average fairness index per TCP variant",
                            "Jain's fairness index", jfi_labels, jfi_means, 1.0));
}

}  // namespace ptcpsim
