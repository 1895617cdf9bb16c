// Command-line front end: runs experiment matrices, validates configs and
// re-renders plots from an existing summary.csv.
//
// Exit codes: 0 success, 1 configuration error, 2 scenario fault, 3 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "ptcpsim/ptcpsim.hpp"

namespace fs = std::filesystem;
using namespace ptcpsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitScenario = 2;
constexpr int kExitIo = 3;

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(text);
}

void apply_overrides(ExperimentConfig& cfg, const std::string& variants,
                     const std::string& flows, std::uint64_t seed,
                     bool seed_set) {
  if (!variants.empty()) {
    cfg.variants.clear();
    for (const auto& v : detail::split(variants, ',')) {
      if (!is_known_variant(v))
        throw ConfigError("--variants: unknown variant name '" + v + "'");
      cfg.variants.push_back(v);
    }
    if (cfg.variants.empty()) throw ConfigError("--variants: empty list");
  }
  if (!flows.empty()) {
    cfg.flow_counts.clear();
    for (const auto& item : detail::split(flows, ',')) {
      long n = 0;
      try {
        n = std::stol(item);
      } catch (const std::exception&) {
        n = 0;
      }
      if (n < 1) throw ConfigError("--flows: entries must be integers >= 1");
      cfg.flow_counts.push_back(static_cast<std::uint32_t>(n));
    }
  }
  if (seed_set) cfg.seed = seed;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& variants, const std::string& flows,
            std::uint64_t seed, bool seed_set, bool no_plots, unsigned jobs) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    apply_overrides(cfg, variants, flows, seed, seed_set);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  // Probe writability before any simulation starts.
  try {
    write_file(out_dir + "/metadata.ini", render_config(cfg));
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }

  std::size_t cell_count =
      cfg.variants.size() * cfg.flow_counts.size() * cfg.repetitions;
  std::cout << "running " << cell_count << " scenarios (jobs=" << jobs << ")\n";

  bool any_failed = false;
  std::vector<RunRecord> records;
  try {
    records = run_matrix(cfg, jobs,
                         [&](const RunRecord& rec,
                             const std::vector<SeriesPoint>& series) {
                           if (rec.failed) {
                             any_failed = true;
                             std::cerr << "scenario fault: " << rec.fail_reason
                                       << "\n";
                             return;
                           }
                           if (cfg.record_series)
                             write_file(out_dir + "/" +
                                            series_file_name(rec.variant, rec.n,
                                                             rec.rep),
                                        render_series_csv(series));
                         });
    write_file(out_dir + "/summary.csv", render_summary_csv(records));
    if (!no_plots) emit_plots(records, out_dir);
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }

  std::cout << "wrote " << out_dir << "/summary.csv (" << records.size()
            << " rows)\n";
  if (any_failed) return kExitScenario;
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  try {
    ExperimentConfig cfg = load_config(config_path);
    std::cout << render_config(cfg);
    std::cout << "# ok: " << cfg.variants.size() << " variants x "
              << cfg.flow_counts.size() << " flow counts x " << cfg.repetitions
              << " repetitions\n";
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_plot(const std::string& summary_path, std::string out_dir) {
  try {
    if (out_dir.empty())
      out_dir = fs::path(summary_path).parent_path().string();
    if (out_dir.empty()) out_dir = ".";
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::vector<RunRecord> records = parse_summary_csv(read_file(summary_path));
    emit_plots(records, out_dir);
    for (const auto& name : plot_file_names())
      std::cout << "wrote " << out_dir << "/" << name << "\n";
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptcpsim: parallel-TCP dumbbell simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", variants, flows, summary_path;
  std::string plot_out;
  std::uint64_t seed = 0;
  bool no_plots = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "run an experiment matrix");
  run->add_option("config", config_path, "experiment config (INI)")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  auto* seed_opt = run->add_option("--seed", seed, "override the master seed");
  run->add_option("--variants", variants, "comma list overriding variants");
  run->add_option("--flows", flows, "comma list overriding flow counts");
  run->add_flag("--no-plots", no_plots, "skip plot emission");
  run->add_option("--jobs", jobs, "concurrent scenarios");

  auto* validate = app.add_subcommand("validate", "parse and echo a config");
  validate->add_option("config", config_path, "experiment config (INI)")
      ->required();

  auto* plot = app.add_subcommand("plot", "render plots from a summary.csv");
  plot->add_option("summary", summary_path, "summary.csv path")->required();
  plot->add_option("--out", plot_out, "output directory (default: alongside)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(config_path, out_dir, variants, flows, seed,
                   seed_opt->count() > 0, no_plots, jobs);
  if (validate->parsed()) return cmd_validate(config_path);
  return cmd_plot(summary_path, plot_out);
}
