#include "froshe/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "froshe/config.hpp"
#include "froshe/engine.hpp"
#include "froshe/error.hpp"

namespace froshe {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string scenario;
  std::string matrix;
  std::optional<std::string> strategy;
  std::optional<int> robots;
  std::optional<std::uint64_t> seed;
  std::optional<int> repeat;
  std::string out_dir;
  bool debug_traces = false;
  unsigned jobs = 0;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(fmt::format("cannot write '{}'", path.string()));
  f << text;
  if (!f) throw Error(fmt::format("write failed for '{}'", path.string()));
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(fmt::format("cannot create output directory '{}'", dir.string()));
  }
}

void apply_overrides(const Options& opt, SimConfig& c) {
  if (opt.strategy) c.strategy = *opt.strategy;
  if (opt.robots) c.scenario.robot_count = *opt.robots;
  if (opt.seed) c.master_seed = *opt.seed;
  if (opt.repeat) c.repeat_count = *opt.repeat;
  if (opt.debug_traces) c.debug_traces = true;
}

/// Runs one config's suite into `dir`: manifest.yaml, run_NNN.csv per seed,
/// summary.json, and trace CSVs when requested.
SuiteResult run_into(const SimConfig& config, const fs::path& dir, unsigned jobs) {
  const SimConfig resolved = resolve(config);
  prepare_dir(dir);
  write_text(dir / "manifest.yaml", emit_config(resolved));
  SuiteResult suite = run_suite(resolved, jobs);
  for (std::size_t k = 0; k < suite.runs.size(); ++k) {
    const auto& run = suite.runs[k];
    const std::string stem = fmt::format("run_{:03d}", k);
    write_text(dir / (stem + ".csv"), metrics_csv(run));
    if (run.traces) {
      write_text(dir / (stem + "_swarm.csv"), run.traces->swarm);
      write_text(dir / (stem + "_decisions.csv"), run.traces->decisions);
      for (std::size_t r = 0; r < run.traces->monitors.size(); ++r) {
        write_text(dir / fmt::format("{}_monitor_r{}.csv", stem, r), run.traces->monitors[r]);
      }
    }
  }
  write_text(dir / "summary.json", suite_json(suite));
  return suite;
}

std::string stats_row(const SuiteStats& s) {
  return fmt::format("{},{},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f}", s.runs, s.completed,
                     s.median, s.mean, s.q1, s.q3, s.iqr, s.min, s.max);
}

int run_single(const Options& opt, std::ostream& out) {
  SimConfig c = load_config(opt.scenario);
  apply_overrides(opt, c);
  const SuiteResult suite = run_into(c, opt.out_dir, opt.jobs);
  out << fmt::format("{} robots={} runs={} completed={} median={:.3f}s iqr={:.3f}s -> {}\n",
                     c.strategy, c.scenario.robot_count, suite.stats.runs, suite.stats.completed,
                     suite.stats.median, suite.stats.iqr, opt.out_dir);
  return 0;
}

int run_matrix(const Options& opt, std::ostream& out) {
  ExperimentMatrix m = load_matrix(opt.matrix);
  if (opt.strategy) m.strategies = {*opt.strategy};
  if (opt.robots) m.robot_counts = {*opt.robots};
  Options base_only = opt;
  base_only.strategy.reset();
  base_only.robots.reset();
  apply_overrides(base_only, m.base);

  const auto cells = m.cells();
  for (const auto& cell : cells) resolve(cell.config);  // fail before any run starts

  const fs::path root = opt.out_dir;
  prepare_dir(root);
  std::string table =
      "label,environment,side_length,robot_count,strategy,runs,completed,median,mean,q1,q3,iqr,"
      "min,max\n";
  for (const auto& cell : cells) {
    const SuiteResult suite = run_into(cell.config, root / cell.label, opt.jobs);
    const auto& sc = cell.config.scenario;
    const std::string row =
        fmt::format("{},{},{},{},{},{}", cell.label, to_string(sc.environment_kind),
                    sc.side_length, sc.robot_count, cell.config.strategy, stats_row(suite.stats));
    table += row + "\n";
    out << row << "\n";
  }
  write_text(root / "aggregate.csv", table);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic multi-robot frontier exploration simulator"};
  Options opt;
  app.add_option("--scenario", opt.scenario, "Run config (YAML)");
  app.add_option("--matrix", opt.matrix, "Experiment matrix (YAML)");
  app.add_option("--strategy", opt.strategy, "froshe, greedy or utility");
  app.add_option("--robots", opt.robots, "Robot count")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Master seed");
  app.add_option("--repeat", opt.repeat, "Runs per config")->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out_dir, "Output directory");
  app.add_option("--jobs", opt.jobs, "Worker threads per suite (0: all cores)");
  app.add_flag("--debug-traces", opt.debug_traces, "Write swarm, decision and monitor traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  if (opt.scenario.empty() == opt.matrix.empty()) {
    err << "error: give exactly one of --scenario or --matrix\n" << app.help();
    return 2;
  }
  if (opt.out_dir.empty()) {
    const char* env = std::getenv("FROSHE_OUT_DIR");
    opt.out_dir = env && *env ? env : "froshe_out";
  }

  try {
    return opt.matrix.empty() ? run_single(opt, out) : run_matrix(opt, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace froshe
