#include "demon/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace demon {

namespace {

using nlohmann::json;

double read_bound(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    throw ConfigError(std::string("bad bound string for ") + key + ": " + s);
  }
  return v.get<double>();
}

template <typename T>
T read_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

ReservoirSpec read_reservoir(const json& j, Reservoir label) {
  ReservoirSpec res;
  res.label = label;
  res.beta = read_or(j, "beta", res.beta);
  if (j.contains("temperature")) {
    if (j.contains("beta"))
      throw ConfigError("give either beta or temperature, not both");
    res.beta = 1.0 / j.at("temperature").get<double>();
  }
  res.mu = read_or(j, "mu", res.mu);
  res.gamma0 = read_or(j, "gamma0", res.gamma0);
  res.eps_center = read_or(j, "eps_center", res.eps_center);
  res.delta_width = read_or(j, "delta_width", res.delta_width);
  res.omega_min = read_bound(j, "omega_min", -kInf);
  res.omega_max = read_bound(j, "omega_max", kInf);
  return res;
}

std::vector<SolverKind> read_solvers(const json& j, const char* key,
                                     std::vector<SolverKind> fallback) {
  if (!j.contains(key)) return fallback;
  std::vector<SolverKind> out;
  for (const auto& s : j.at(key)) out.push_back(solver_from_string(s.get<std::string>()));
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("mode")) cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("solver"))
      cfg.solver_override = solver_from_string(j.at("solver").get<std::string>());

    if (j.contains("dot")) cfg.system.dot.epsilon = read_or(j.at("dot"), "epsilon", 1.0);
    if (j.contains("left")) cfg.system.left = read_reservoir(j.at("left"), Reservoir::L);
    if (j.contains("right"))
      cfg.system.right = read_reservoir(j.at("right"), Reservoir::R);
    if (j.contains("feedback")) {
      const auto& f = j.at("feedback");
      cfg.system.feedback.tau = read_or(f, "tau", cfg.system.feedback.tau);
      cfg.system.feedback.delta = read_or(f, "delta", cfg.system.feedback.delta);
    }

    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      cfg.grid.v_min = read_or(g, "v_min", cfg.grid.v_min);
      cfg.grid.v_max = read_or(g, "v_max", cfg.grid.v_max);
      cfg.grid.v_steps = read_or(g, "v_steps", cfg.grid.v_steps);
      cfg.grid.tau_min = read_or(g, "tau_min", cfg.grid.tau_min);
      cfg.grid.tau_max = read_or(g, "tau_max", cfg.grid.tau_max);
      cfg.grid.tau_steps = read_or(g, "tau_steps", cfg.grid.tau_steps);
      cfg.grid.tau_log = read_or(g, "tau_log", cfg.grid.tau_log);
      cfg.grid.deltas = read_or(g, "deltas", cfg.grid.deltas);
    }
    if (j.contains("tau_scan")) {
      const auto& s = j.at("tau_scan");
      cfg.scan.tau_min = read_or(s, "tau_min", cfg.scan.tau_min);
      cfg.scan.tau_max = read_or(s, "tau_max", cfg.scan.tau_max);
      cfg.scan.steps = read_or(s, "steps", cfg.scan.steps);
      cfg.scan.deltas = read_or(s, "deltas", cfg.scan.deltas);
      cfg.scan.solvers = read_solvers(s, "solvers", cfg.scan.solvers);
    }
    if (j.contains("trace")) {
      const auto& t = j.at("trace");
      cfg.trace.t_max = read_or(t, "t_max", cfg.trace.t_max);
      cfg.trace.steps = read_or(t, "steps", cfg.trace.steps);
      cfg.trace.n_dot0 = read_or(t, "n_dot0", cfg.trace.n_dot0);
      cfg.trace.solvers = read_solvers(t, "solvers", cfg.trace.solvers);
    }
    if (j.contains("zeno_check")) {
      const auto& z = j.at("zeno_check");
      cfg.zeno.tau_min = read_or(z, "tau_min", cfg.zeno.tau_min);
      cfg.zeno.tau_max = read_or(z, "tau_max", cfg.zeno.tau_max);
      cfg.zeno.steps = read_or(z, "steps", cfg.zeno.steps);
    }
    if (j.contains("bath")) {
      cfg.bath.modes_per_reservoir =
          read_or(j.at("bath"), "modes_per_reservoir", cfg.bath.modes_per_reservoir);
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      cfg.moments.quad.abs_tol = read_or(t, "quad_abs_tol", cfg.moments.quad.abs_tol);
      cfg.moments.quad.max_intervals =
          read_or(t, "quad_max_intervals", cfg.moments.quad.max_intervals);
      cfg.moments.chi_step = read_or(t, "chi_step", cfg.moments.chi_step);
      cfg.moments.zeta_step = read_or(t, "zeta_step", cfg.moments.zeta_step);
      cfg.moments.cross_check = read_or(t, "cross_check", cfg.moments.cross_check);
      cfg.moments.cross_rtol = read_or(t, "cross_rtol", cfg.moments.cross_rtol);
    }
    cfg.workers = read_or(j, "workers", cfg.workers);
    cfg.seed = read_or(j, "seed", cfg.seed);
    cfg.zeno_fallback_tau = read_or(j, "zeno_fallback_tau", cfg.zeno_fallback_tau);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }

  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.grid.v_steps < 1 || cfg.grid.tau_steps < 1 || cfg.scan.steps < 1 ||
      cfg.trace.steps < 1 || cfg.zeno.steps < 1)
    throw ConfigError("grid steps must be >= 1");
  if (!(cfg.grid.tau_min > 0.0) || !(cfg.scan.tau_min > 0.0))
    throw ConfigError("stationary sweeps need tau > 0");
  cfg.system.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace demon
