#include "demon/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "demon/linalg2.hpp"

namespace demon {

const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::DCG: return "dcg";
    case SolverKind::BMS: return "bms";
    case SolverKind::Zeno: return "zeno";
    case SolverKind::Exact: return "exact";
  }
  return "?";
}

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::Trace: return "trace";
    case RunMode::TauScan: return "tau-scan";
    case RunMode::Grid: return "grid";
    case RunMode::ZenoCheck: return "zeno-check";
    case RunMode::Benchmark: return "benchmark";
  }
  return "?";
}

SolverKind solver_from_string(const std::string& s) {
  if (s == "dcg") return SolverKind::DCG;
  if (s == "bms") return SolverKind::BMS;
  if (s == "zeno") return SolverKind::Zeno;
  if (s == "exact") return SolverKind::Exact;
  throw ConfigError("unknown solver '" + s + "'");
}

RunMode mode_from_string(const std::string& s) {
  if (s == "trace") return RunMode::Trace;
  if (s == "tau-scan" || s == "tau_scan") return RunMode::TauScan;
  if (s == "grid") return RunMode::Grid;
  if (s == "zeno-check" || s == "zeno_check") return RunMode::ZenoCheck;
  if (s == "benchmark") return RunMode::Benchmark;
  throw ConfigError("unknown mode '" + s + "'");
}

std::string format_double(double x) {
  if (x == 0.0) return "0";  // normalize negative zero
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("linspace: n >= 1");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = a + h * i;
  v.back() = b;
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("logspace: a, b > 0");
  std::vector<double> v = linspace(std::log(a), std::log(b), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string sweep_csv_header() {
  return "V,tau,delta,I_m,P,dE_fb,G,Q_L,Q_R,Q,dS_sys,dS_res,info,eta,n_s,phi2,"
         "solver,status";
}

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

SweepRow row_from_report(const ThermoReport& rep) {
  SweepRow row;
  row.tau = rep.tau;
  row.I_m = rep.current;
  row.P = rep.power;
  row.dE_fb = rep.feedback_energy;
  row.G = rep.gain;
  row.Q_L = rep.heat[0];
  row.Q_R = rep.heat[1];
  row.Q = rep.heat_total;
  row.dS_sys = rep.entropy_sys;
  row.dS_res = rep.entropy_res;
  row.info = rep.information;
  row.eta = rep.efficiency;
  row.n_s = rep.n_filled;
  row.phi2 = rep.phi2;
  return row;
}

}  // namespace

std::string sweep_csv_line(const SweepRow& row) {
  std::ostringstream os;
  os << format_double(row.V) << ',' << format_double(row.tau) << ','
     << format_double(row.delta) << ',' << opt_field(row.I_m) << ','
     << opt_field(row.P) << ',' << opt_field(row.dE_fb) << ',' << opt_field(row.G)
     << ',' << opt_field(row.Q_L) << ',' << opt_field(row.Q_R) << ','
     << opt_field(row.Q) << ',' << opt_field(row.dS_sys) << ','
     << opt_field(row.dS_res) << ',' << opt_field(row.info) << ','
     << opt_field(row.eta) << ',' << opt_field(row.n_s) << ','
     << opt_field(row.phi2) << ',' << row.solver << ',' << row.status;
  return os.str();
}

SweepRow evaluate_grid_point(const SystemConfig& base, double V, double tau,
                             double delta, SolverKind solver,
                             const MomentOptions& moments,
                             double zeno_fallback_tau) {
  SweepRow row;
  row.V = V;
  row.tau = tau;
  row.delta = delta;
  row.solver = to_string(solver);

  SystemConfig cfg = base;
  // V = mu_L - mu_R applied symmetrically around the configured mean
  // potential; this keeps the per-reservoir heat maps left/right symmetric
  // under V -> -V.
  const double mean_mu = 0.5 * (base.left.mu + base.right.mu);
  cfg.left.mu = mean_mu + 0.5 * V;
  cfg.right.mu = mean_mu - 0.5 * V;
  cfg.feedback.tau = tau;
  cfg.feedback.delta = delta;

  try {
    ThermoReport rep;
    switch (solver) {
      case SolverKind::DCG: {
        if (tau < zeno_fallback_tau) {
          rep = zeno_thermo_report(tau, cfg, moments.quad);
          row.status = "zeno_fallback";
        } else {
          try {
            rep = thermo_report(tau, cfg, GeneratorKind::DCG, moments);
          } catch (const DegenerateFixedPoint&) {
            rep = zeno_thermo_report(tau, cfg, moments.quad);
            row.status = "zeno_fallback";
          }
        }
        break;
      }
      case SolverKind::BMS:
        rep = thermo_report(tau, cfg, GeneratorKind::BMS, moments);
        break;
      case SolverKind::Zeno:
        rep = zeno_thermo_report(tau, cfg, moments.quad);
        break;
      case SolverKind::Exact:
        row.status = "unsupported_solver";
        return row;
    }
    const std::string status = row.status;
    row = row_from_report(rep);
    row.V = V;
    row.delta = delta;
    row.solver = to_string(solver);
    row.status = status;
  } catch (const QuadratureFailure&) {
    row.status = "quadrature_failure";
  } catch (const MomentToleranceFailure&) {
    row.status = "moment_mismatch";
  } catch (const ConservationViolation&) {
    row.status = "conservation_violation";
  } catch (const SecondLawViolation&) {
    row.status = "second_law_violation";
  } catch (const CutoffRequired&) {
    row.status = "cutoff_required";
  } catch (const DegenerateFixedPoint&) {
    row.status = "degenerate_fixed_point";
  }
  return row;
}

namespace {

namespace fs = std::filesystem;

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  out.flush();
  return out.good();
}

std::vector<SolverKind> select_solvers(const std::vector<SolverKind>& requested,
                                       const std::optional<SolverKind>& override_) {
  if (!override_) return requested;
  return {*override_};
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << sweep_csv_header() << '\n';
  for (const SweepRow& row : rows) os << sweep_csv_line(row) << '\n';
  return os.str();
}

// Gnuplot-friendly dense matrix: axis header lines, then one row per tau.
std::string matrix_text(const std::string& name, const std::vector<double>& v_axis,
                        const std::vector<double>& tau_axis,
                        const std::function<double(int, int)>& at) {
  std::ostringstream os;
  os << "# matrix: " << name << '\n';
  os << "# rows: tau (" << tau_axis.size() << "), cols: V (" << v_axis.size()
     << ")\n";
  os << "# V:";
  for (double v : v_axis) os << ' ' << format_double(v);
  os << "\n# tau:";
  for (double t : tau_axis) os << ' ' << format_double(t);
  os << '\n';
  for (size_t i = 0; i < tau_axis.size(); ++i) {
    for (size_t j = 0; j < v_axis.size(); ++j) {
      if (j) os << ' ';
      os << format_double(at(static_cast<int>(i), static_cast<int>(j)));
    }
    os << '\n';
  }
  return os.str();
}

// Sign-change points of `value` along both grid directions, linearly
// interpolated; these trace the zero-level curves of the heatmaps.
std::string contour_text(const std::vector<double>& v_axis,
                         const std::vector<double>& tau_axis,
                         const std::function<std::optional<double>(int, int)>& at) {
  std::ostringstream os;
  os << "V,tau\n";
  const int nt = static_cast<int>(tau_axis.size());
  const int nv = static_cast<int>(v_axis.size());
  auto emit = [&os](double v, double t) {
    os << format_double(v) << ',' << format_double(t) << '\n';
  };
  // grid points lying exactly on the zero level
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nv; ++j) {
      const auto a = at(i, j);
      if (a && *a == 0.0) emit(v_axis[j], tau_axis[i]);
    }
  // sign changes between neighbors, linearly interpolated
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j + 1 < nv; ++j) {
      const auto a = at(i, j), b = at(i, j + 1);
      if (!a || !b || *a == 0.0 || *b == 0.0) continue;
      if ((*a < 0.0) != (*b < 0.0)) {
        const double s = *a / (*a - *b);
        emit(v_axis[j] + s * (v_axis[j + 1] - v_axis[j]), tau_axis[i]);
      }
    }
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i + 1 < nt; ++i) {
      const auto a = at(i, j), b = at(i + 1, j);
      if (!a || !b || *a == 0.0 || *b == 0.0) continue;
      if ((*a < 0.0) != (*b < 0.0)) {
        const double s = *a / (*a - *b);
        emit(v_axis[j], tau_axis[i] + s * (tau_axis[i + 1] - tau_axis[i]));
      }
    }
  return os.str();
}

}  // namespace

RunResult run_grid(const RunConfig& cfg, const std::string& out_dir) {
  RunResult result;
  const std::vector<double> v_axis = linspace(cfg.grid.v_min, cfg.grid.v_max,
                                              cfg.grid.v_steps);
  const std::vector<double> tau_axis =
      cfg.grid.tau_log ? logspace(cfg.grid.tau_min, cfg.grid.tau_max,
                                  cfg.grid.tau_steps)
                       : linspace(cfg.grid.tau_min, cfg.grid.tau_max,
                                  cfg.grid.tau_steps);
  const SolverKind solver = cfg.solver_override.value_or(SolverKind::DCG);

  const int nv = static_cast<int>(v_axis.size());
  const int nt = static_cast<int>(tau_axis.size());
  const int nd = static_cast<int>(cfg.grid.deltas.size());
  std::vector<SweepRow> rows(static_cast<size_t>(nd) * nt * nv);

  parallel_for(nd * nt * nv, cfg.workers, [&](int idx) {
    const int d = idx / (nt * nv);
    const int i = (idx / nv) % nt;
    const int j = idx % nv;
    rows[idx] = evaluate_grid_point(cfg.system, v_axis[j], tau_axis[i],
                                    cfg.grid.deltas[d], solver, cfg.moments,
                                    cfg.zeno_fallback_tau);
  });

  const std::string rows_path = out_dir + "/rows.csv";
  if (!write_text(rows_path, rows_to_csv(rows))) return {3, {}, "cannot write " + rows_path};
  result.files.push_back(rows_path);

  for (int d = 0; d < nd; ++d) {
    const std::string suffix =
        (nd == 1) ? std::string{}
                  : "_delta" + format_double(cfg.grid.deltas[d]);
    const auto row_at = [&](int i, int j) -> const SweepRow& {
      return rows[static_cast<size_t>(d) * nt * nv + static_cast<size_t>(i) * nv + j];
    };
    const auto field =
        [&](const std::function<std::optional<double>(const SweepRow&)>& get) {
          return [&, get](int i, int j) { return get(row_at(i, j)); };
        };

    struct MatrixSpec {
      const char* name;
      std::function<std::optional<double>(const SweepRow&)> get;
    };
    const std::vector<MatrixSpec> specs{
        {"P", [](const SweepRow& r) { return r.P; }},
        // display-clipped gain, G in (0, 40); undefined points emit nan
        {"G",
         [](const SweepRow& r) -> std::optional<double> {
           if (!r.G) return std::nullopt;
           return std::min(*r.G, 40.0);
         }},
        {"Q", [](const SweepRow& r) { return r.Q; }},
        {"Q_L", [](const SweepRow& r) { return r.Q_L; }},
        {"Q_R", [](const SweepRow& r) { return r.Q_R; }},
        {"dE_fb", [](const SweepRow& r) { return r.dE_fb; }},
        {"eta", [](const SweepRow& r) { return r.eta; }},
    };
    for (const MatrixSpec& spec : specs) {
      const auto get = field(spec.get);
      const std::string path =
          out_dir + "/matrix_" + spec.name + suffix + ".dat";
      const std::string text = matrix_text(
          spec.name, v_axis, tau_axis, [&](int i, int j) {
            const auto v = get(i, j);
            return v ? *v : std::numeric_limits<double>::quiet_NaN();
          });
      if (!write_text(path, text)) return {3, result.files, "cannot write " + path};
      result.files.push_back(path);
    }
    for (const char* name : {"P", "Q"}) {
      const auto get = field(name == std::string("P")
                                 ? specs[0].get
                                 : specs[2].get);
      const std::string path =
          out_dir + "/contour_" + name + suffix + ".csv";
      if (!write_text(path, contour_text(v_axis, tau_axis, get)))
        return {3, result.files, "cannot write " + path};
      result.files.push_back(path);
    }
  }

  int failed = 0;
  for (const SweepRow& row : rows)
    if (row.status != "ok" && row.status != "zeno_fallback") ++failed;
  std::ostringstream summary;
  summary << "grid: " << rows.size() << " points, " << failed << " failed";
  result.summary = summary.str();
  if (failed * 20 > static_cast<int>(rows.size()))  // > 5% failure budget
    result.exit_code = 2;
  return result;
}

RunResult run_tau_scan(const RunConfig& cfg, const std::string& out_dir) {
  RunResult result;
  const std::vector<double> taus =
      logspace(cfg.scan.tau_min, cfg.scan.tau_max, cfg.scan.steps);
  const std::vector<SolverKind> solvers =
      select_solvers(cfg.scan.solvers, cfg.solver_override);

  const int nt = static_cast<int>(taus.size());
  const int ns = static_cast<int>(solvers.size());
  const int nd = static_cast<int>(cfg.scan.deltas.size());
  std::vector<SweepRow> rows(static_cast<size_t>(nd) * ns * nt);

  const double V = cfg.system.bias();
  parallel_for(nd * ns * nt, cfg.workers, [&](int idx) {
    const int d = idx / (ns * nt);
    const int s = (idx / nt) % ns;
    const int i = idx % nt;
    rows[idx] = evaluate_grid_point(cfg.system, V, taus[i], cfg.scan.deltas[d],
                                    solvers[s], cfg.moments, cfg.zeno_fallback_tau);
  });

  const std::string path = out_dir + "/tau_scan.csv";
  if (!write_text(path, rows_to_csv(rows))) return {3, {}, "cannot write " + path};
  result.files.push_back(path);

  int failed = 0;
  for (const SweepRow& row : rows)
    if (row.status != "ok" && row.status != "zeno_fallback") ++failed;
  std::ostringstream summary;
  summary << "tau-scan: " << rows.size() << " rows, " << failed << " failed";
  result.summary = summary.str();
  if (failed * 20 > static_cast<int>(rows.size())) result.exit_code = 2;
  return result;
}

namespace {

// Feedback-free occupation curves; the couplings are the Empty-conditioned
// ones (identical to Filled when delta = 0).
std::vector<double> dcg_trace(const SystemConfig& cfg, double n0,
                              const std::vector<double>& times,
                              const quad::Options& opts) {
  std::vector<double> out;
  out.reserve(times.size());
  const Eigen::Vector2cd s0{std::complex<double>(1.0 - n0),
                            std::complex<double>(n0)};
  for (double t : times) {
    if (t == 0.0) {
      out.push_back(n0);
      continue;
    }
    const CGLiouvillian L = build_cg_liouvillian(t, cfg, Outcome::Empty, {}, opts);
    const Eigen::Vector2cd s = propagator(t, L) * s0;
    out.push_back(s(1).real());
  }
  return out;
}

std::vector<double> bms_trace(const SystemConfig& cfg, double n0,
                              const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  const CGLiouvillian L = bms_liouvillian(cfg, Outcome::Empty, {});
  const Eigen::Vector2cd s0{std::complex<double>(1.0 - n0),
                            std::complex<double>(n0)};
  for (double t : times) {
    const Eigen::Vector2cd s = expm2(L.mat * t) * s0;
    out.push_back(s(1).real());
  }
  return out;
}

double bms_stationary_occupation(const SystemConfig& cfg) {
  double g10 = 0.0, g01 = 0.0;
  for (Reservoir r : kReservoirs) {
    const CGRatePair p =
        bms_rates(cfg.reservoir(r), Outcome::Empty, cfg.feedback, cfg.dot);
    g10 += p.gamma10.real();
    g01 += p.gamma01.real();
  }
  return g10 / (g10 + g01);
}

struct TraceData {
  std::vector<double> times;
  std::vector<SolverKind> solvers;
  std::vector<std::vector<double>> columns;
};

TraceData compute_traces(const RunConfig& cfg) {
  TraceData data;
  data.times = linspace(0.0, cfg.trace.t_max, cfg.trace.steps);
  data.solvers = select_solvers(cfg.trace.solvers, cfg.solver_override);
  for (SolverKind s : data.solvers) {
    switch (s) {
      case SolverKind::DCG:
        data.columns.push_back(
            dcg_trace(cfg.system, cfg.trace.n_dot0, data.times, cfg.moments.quad));
        break;
      case SolverKind::BMS:
        data.columns.push_back(bms_trace(cfg.system, cfg.trace.n_dot0, data.times));
        break;
      case SolverKind::Exact: {
        const ExactSolver solver(cfg.system, cfg.bath.modes_per_reservoir);
        data.columns.push_back(
            solver.occupation_trace(cfg.trace.n_dot0, Outcome::Empty, data.times));
        break;
      }
      case SolverKind::Zeno:
        throw ConfigError("trace mode has no zeno solver");
    }
  }
  return data;
}

std::string trace_csv(const TraceData& data) {
  std::ostringstream os;
  os << "t";
  for (SolverKind s : data.solvers) os << ",n_d_" << to_string(s);
  os << '\n';
  for (size_t i = 0; i < data.times.size(); ++i) {
    os << format_double(data.times[i]);
    for (const auto& col : data.columns) os << ',' << format_double(col[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace

RunResult run_trace(const RunConfig& cfg, const std::string& out_dir) {
  RunResult result;
  TraceData data;
  try {
    data = compute_traces(cfg);
  } catch (const HorizonExceeded& e) {
    return {2, {}, std::string("horizon: ") + e.what()};
  } catch (const QuadratureFailure& e) {
    return {2, {}, std::string("quadrature: ") + e.what()};
  }
  const std::string path = out_dir + "/trace.csv";
  if (!write_text(path, trace_csv(data))) return {3, {}, "cannot write " + path};
  result.files.push_back(path);
  result.summary = "trace: " + std::to_string(data.times.size()) + " samples";
  return result;
}

RunResult run_benchmark(const RunConfig& cfg, const std::string& out_dir) {
  RunConfig full = cfg;
  full.trace.solvers = {SolverKind::DCG, SolverKind::Exact, SolverKind::BMS};
  if (cfg.solver_override) full.trace.solvers = {*cfg.solver_override};
  full.solver_override.reset();

  TraceData data;
  try {
    data = compute_traces(full);
  } catch (const HorizonExceeded& e) {
    return {2, {}, std::string("horizon: ") + e.what()};
  } catch (const QuadratureFailure& e) {
    return {2, {}, std::string("quadrature: ") + e.what()};
  }

  RunResult result;
  const std::string path = out_dir + "/benchmark.csv";
  if (!write_text(path, trace_csv(data))) return {3, {}, "cannot write " + path};
  result.files.push_back(path);

  std::ostringstream summary;
  const auto col_of = [&](SolverKind k) -> const std::vector<double>* {
    for (size_t i = 0; i < data.solvers.size(); ++i)
      if (data.solvers[i] == k) return &data.columns[i];
    return nullptr;
  };
  const auto* dcg = col_of(SolverKind::DCG);
  const auto* exact = col_of(SolverKind::Exact);
  if (dcg && exact) {
    double dev_short = 0.0;
    for (size_t i = 0; i < data.times.size(); ++i)
      if (data.times[i] <= 0.5)
        dev_short = std::max(dev_short, std::abs((*dcg)[i] - (*exact)[i]));
    summary << "max |dcg - exact| on t in [0, 0.5]: " << format_double(dev_short)
            << '\n';
  }
  if (dcg) {
    const double bms_ss = bms_stationary_occupation(cfg.system);
    summary << "|dcg(t_max) - bms stationary|: "
            << format_double(std::abs(dcg->back() - bms_ss)) << '\n';
  }
  result.summary = summary.str();
  const std::string sum_path = out_dir + "/benchmark_summary.txt";
  if (!write_text(sum_path, result.summary))
    return {3, result.files, "cannot write " + sum_path};
  result.files.push_back(sum_path);
  return result;
}

RunResult run_zeno_check(const RunConfig& cfg, const std::string& out_dir) {
  RunResult result;
  const std::vector<double> taus =
      logspace(cfg.zeno.tau_min, cfg.zeno.tau_max, cfg.zeno.steps);

  std::ostringstream os;
  os << "tau,I_m_zeno,I_m_dcg,rel_diff_I,dE_fb_zeno,dE_fb_dcg,rel_diff_E,"
        "smallness,status\n";
  int failed = 0;
  for (double tau : taus) {
    std::string status = "ok";
    try {
      const ZenoMoments zm = zeno_first_moments(tau, cfg.system, cfg.moments.quad);
      const double i_zeno = zm.dn[1] / tau;
      const double e_zeno = zm.dE[0] + zm.dE[1];
      const ThermoReport rep =
          thermo_report(tau, cfg.system, GeneratorKind::DCG, cfg.moments);
      const auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
      };
      os << format_double(tau) << ',' << format_double(i_zeno) << ','
         << format_double(rep.current) << ',' << format_double(rel(i_zeno, rep.current))
         << ',' << format_double(e_zeno) << ','
         << format_double(rep.feedback_energy) << ','
         << format_double(rel(e_zeno, rep.feedback_energy)) << ','
         << format_double(zeno_smallness(tau, cfg.system, cfg.moments.quad)) << ','
         << status << '\n';
    } catch (const std::runtime_error& e) {
      (void)e;
      ++failed;
      os << format_double(tau) << ",,,,,,,," << "failed" << '\n';
    }
  }
  const std::string path = out_dir + "/zeno_check.csv";
  if (!write_text(path, os.str())) return {3, {}, "cannot write " + path};
  result.files.push_back(path);
  std::ostringstream summary;
  summary << "zeno-check: " << taus.size() << " rows, " << failed << " failed";
  result.summary = summary.str();
  if (failed * 20 > static_cast<int>(taus.size())) result.exit_code = 2;
  return result;
}

RunResult run(const RunConfig& cfg, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) return {3, {}, "cannot create output directory " + out_dir};
  switch (cfg.mode) {
    case RunMode::Trace: return run_trace(cfg, out_dir);
    case RunMode::TauScan: return run_tau_scan(cfg, out_dir);
    case RunMode::Grid: return run_grid(cfg, out_dir);
    case RunMode::ZenoCheck: return run_zeno_check(cfg, out_dir);
    case RunMode::Benchmark: return run_benchmark(cfg, out_dir);
  }
  return {1, {}, "unknown mode"};
}

}  // namespace demon
