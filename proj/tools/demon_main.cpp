#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "demon/config_io.hpp"
#include "demon/sweep.hpp"

// Exit codes: 0 success, 1 config error, 2 numerical failure budget exceeded,
// 3 IO error.

int main(int argc, char** argv) {
  CLI::App app{"demon: single-electron transistor under projective-measurement "
               "feedback (coarse-grained counting statistics)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int workers = 0;
  std::string solver;

  // config-file problems (including a missing file) must exit with code 1,
  // so existence is checked by the loader, not the parser
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "worker threads (overrides config)");
    sub->add_option("--solver", solver, "dcg|bms|zeno|exact (overrides config)");
  };

  CLI::App* trace = app.add_subcommand("trace", "occupation n_d(t) time series");
  CLI::App* scan = app.add_subcommand("tau-scan", "currents vs feedback time");
  CLI::App* grid = app.add_subcommand("grid", "(V, tau) thermodynamic maps");
  CLI::App* zeno = app.add_subcommand("zeno-check",
                                      "short-time expansion vs full pipeline");
  CLI::App* bench = app.add_subcommand("benchmark",
                                       "dcg / exact / bms occupation benchmark");
  for (CLI::App* sub : {trace, scan, grid, zeno, bench}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  demon::RunConfig cfg;
  try {
    cfg = demon::load_run_config(config_path);
    if (trace->parsed()) cfg.mode = demon::RunMode::Trace;
    if (scan->parsed()) cfg.mode = demon::RunMode::TauScan;
    if (grid->parsed()) cfg.mode = demon::RunMode::Grid;
    if (zeno->parsed()) cfg.mode = demon::RunMode::ZenoCheck;
    if (bench->parsed()) cfg.mode = demon::RunMode::Benchmark;
    if (workers > 0) cfg.workers = workers;
    if (!solver.empty())
      cfg.solver_override = demon::solver_from_string(solver);
  } catch (const demon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  try {
    const demon::RunResult result = demon::run(cfg, out_dir);
    if (!result.summary.empty()) std::cout << result.summary << '\n';
    for (const std::string& f : result.files) std::cout << "wrote " << f << '\n';
    return result.exit_code;
  } catch (const demon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
