#include "demon/thermo.hpp"

#include <cmath>
#include <sstream>

namespace demon {

namespace {

double xlnx(double p) { return (p > 0.0) ? p * std::log(p) : 0.0; }

}  // namespace

double shannon_entropy(const OccupationVector& sigma) {
  return -xlnx(sigma.p_empty) - xlnx(sigma.p_filled);
}

ThermoReport thermo_report_from(const MomentBundle& bundle, double tau,
                                const SystemConfig& cfg,
                                bool enforce_branch_second_law) {
  ThermoReport rep;
  rep.tau = tau;
  rep.n_filled = bundle.stationary.sigma.p_filled;
  rep.phi2 = bundle.stationary.relaxation_eigenvalue;
  rep.dn = bundle.total.dn;
  rep.dE = bundle.total.dE;

  const double dn_L = bundle.total.dn_of(Reservoir::L);
  const double dn_R = bundle.total.dn_of(Reservoir::R);
  if (std::abs(dn_L + dn_R) > 1e-9) {
    std::ostringstream msg;
    msg << "stroboscopic particle conservation violated: dn_L + dn_R = "
        << dn_L + dn_R;
    throw ConservationViolation(msg.str());
  }
  rep.current = dn_R / tau;

  const double V = cfg.bias();
  rep.power = -dn_R * V / tau;

  rep.feedback_energy =
      bundle.total.dE_of(Reservoir::L) + bundle.total.dE_of(Reservoir::R);

  if (rep.power > 0.0 && rep.feedback_energy > 0.0)
    rep.gain = rep.power * tau / rep.feedback_energy;

  for (Reservoir r : kReservoirs) {
    const int ri = static_cast<int>(r);
    rep.heat[ri] = bundle.total.dE[ri] - cfg.reservoir(r).mu * bundle.total.dn[ri];
  }
  rep.heat_total = rep.heat[0] + rep.heat[1];

  for (Outcome v : kOutcomes) {
    const int vi = static_cast<int>(v);
    BranchThermo& b = rep.branch[vi];
    b.p = bundle.branch[vi].p_branch;
    b.dn = bundle.branch[vi].dn;
    b.dE = bundle.branch[vi].dE;
    b.sigma_end = bundle.branch_final[vi];
    for (Reservoir r : kReservoirs) {
      const int ri = static_cast<int>(r);
      b.dQ[ri] = b.dE[ri] - cfg.reservoir(r).mu * b.dn[ri];
      b.dSe += cfg.reservoir(r).beta * b.dQ[ri];
    }
    // post-measurement state is pure: dS^(nu) = S(sigma^(nu)(tau)) - 0
    b.dS = shannon_entropy(b.sigma_end);
    if (enforce_branch_second_law && b.dS + b.dSe < -1e-9) {
      std::ostringstream msg;
      msg << "branch " << to_string(v)
          << " violates the second law: dS + dS_e = " << b.dS + b.dSe;
      throw SecondLawViolation(msg.str());
    }
    rep.entropy_sys += b.p * b.dS;
    rep.entropy_res += b.p * b.dSe;
  }

  rep.information = -rep.entropy_sys;
  if (rep.information != 0.0) rep.efficiency = rep.entropy_res / rep.information;
  return rep;
}

ThermoReport thermo_report(double tau, const SystemConfig& cfg, GeneratorKind kind,
                           const MomentOptions& opts) {
  const MomentBundle bundle = all_first_moments(tau, cfg, kind, opts);
  return thermo_report_from(bundle, tau, cfg);
}

double electric_power(double tau, const SystemConfig& cfg, GeneratorKind kind,
                      const MomentOptions& opts) {
  return thermo_report(tau, cfg, kind, opts).power;
}

double feedback_energy(double tau, const SystemConfig& cfg, GeneratorKind kind,
                       const MomentOptions& opts) {
  return thermo_report(tau, cfg, kind, opts).feedback_energy;
}

std::optional<double> gain(double tau, const SystemConfig& cfg, GeneratorKind kind,
                           const MomentOptions& opts) {
  return thermo_report(tau, cfg, kind, opts).gain;
}

HeatFlows heat_flows(double tau, const SystemConfig& cfg, GeneratorKind kind,
                     const MomentOptions& opts) {
  const ThermoReport rep = thermo_report(tau, cfg, kind, opts);
  return {rep.heat[0], rep.heat[1], rep.heat_total};
}

EntropyBalance entropy_balance(double tau, const SystemConfig& cfg,
                               GeneratorKind kind, const MomentOptions& opts) {
  const ThermoReport rep = thermo_report(tau, cfg, kind, opts);
  EntropyBalance out;
  out.entropy_sys = rep.entropy_sys;
  out.entropy_res = rep.entropy_res;
  out.information = rep.information;
  out.efficiency = rep.efficiency;
  for (int vi = 0; vi < 2; ++vi) {
    out.branch_dS[vi] = rep.branch[vi].dS;
    out.branch_dSe[vi] = rep.branch[vi].dSe;
  }
  return out;
}

}  // namespace demon
