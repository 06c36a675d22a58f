#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "demon/exact.hpp"
#include "demon/thermo.hpp"
#include "demon/zeno.hpp"

// Sweep front end: single traces, tau scans, (V, tau) grids and the
// exact-solver benchmark, with CSV / gnuplot-matrix output. Grid points are
// independent and evaluated by a worker pool; output is assembled in
// row-major order so identical configs give byte-identical files no matter
// how many workers run.

namespace demon {

enum class RunMode { Trace, TauScan, Grid, ZenoCheck, Benchmark };
enum class SolverKind { DCG, BMS, Zeno, Exact };

const char* to_string(SolverKind k);
const char* to_string(RunMode m);
SolverKind solver_from_string(const std::string& s);
RunMode mode_from_string(const std::string& s);

struct GridSpec {
  double v_min = -20.0, v_max = 20.0;
  int v_steps = 61;
  double tau_min = 0.05, tau_max = 3.0;
  int tau_steps = 61;
  bool tau_log = true;
  std::vector<double> deltas{1.0};
};

struct TauScanSpec {
  double tau_min = 1e-3, tau_max = 1e3;
  int steps = 61;
  std::vector<double> deltas{-1.0, 0.0, 1.0};
  std::vector<SolverKind> solvers{SolverKind::DCG, SolverKind::Zeno,
                                  SolverKind::BMS};
};

struct TraceSpec {
  double t_max = 20.0;
  int steps = 201;
  double n_dot0 = 0.0;
  std::vector<SolverKind> solvers{SolverKind::DCG, SolverKind::Exact,
                                  SolverKind::BMS};
};

struct ZenoCheckSpec {
  double tau_min = 1e-3, tau_max = 1e-1;
  int steps = 21;
};

struct BathSpec {
  int modes_per_reservoir = 2000;
};

struct RunConfig {
  RunMode mode = RunMode::Grid;
  SystemConfig system;
  GridSpec grid;
  TauScanSpec scan;
  TraceSpec trace;
  ZenoCheckSpec zeno;
  BathSpec bath;
  MomentOptions moments;
  int workers = 1;
  std::uint64_t seed = 12345;
  // DCG sweeps switch to the Zeno analytics below eps*tau = this threshold,
  // where the stroboscopic fixed point degenerates.
  double zeno_fallback_tau = 1e-4;
  std::optional<SolverKind> solver_override;
};

struct SweepRow {
  double V = 0.0, tau = 0.0, delta = 0.0;
  std::optional<double> I_m, P, dE_fb, G, Q_L, Q_R, Q, dS_sys, dS_res, info, eta,
      n_s, phi2;
  std::string solver = "dcg";
  std::string status = "ok";
};

std::string sweep_csv_header();
std::string sweep_csv_line(const SweepRow& row);
std::string format_double(double x);  // shortest round-trip form

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);  // log-spaced, a,b > 0

void parallel_for(int n, int workers, const std::function<void(int)>& fn);

// One grid point: bias V = mu_L - mu_R applied symmetrically around the
// configured mean potential, feedback (tau, delta) set, then the selected
// solver's full ledger. Numerical failures land in status.
SweepRow evaluate_grid_point(const SystemConfig& base, double V, double tau,
                             double delta, SolverKind solver,
                             const MomentOptions& moments,
                             double zeno_fallback_tau);

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files;
  std::string summary;
};

RunResult run_trace(const RunConfig& cfg, const std::string& out_dir);
RunResult run_tau_scan(const RunConfig& cfg, const std::string& out_dir);
RunResult run_grid(const RunConfig& cfg, const std::string& out_dir);
RunResult run_zeno_check(const RunConfig& cfg, const std::string& out_dir);
RunResult run_benchmark(const RunConfig& cfg, const std::string& out_dir);
RunResult run(const RunConfig& cfg, const std::string& out_dir);

}  // namespace demon
