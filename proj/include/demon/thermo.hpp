#pragma once

#include <array>
#include <optional>

#include "demon/feedback.hpp"

// Thermodynamic ledger per stationary feedback period: electric power,
// feedback energy, gain, per-reservoir heat, measurement-averaged entropy
// balance, deleted information and information efficiency.
//
// Conventions (all per period, k_B = 1): dE_alpha / dn_alpha count energy and
// particles entering reservoir alpha; dQ_alpha = dE_alpha - mu_alpha dn_alpha;
// Pbar tau = -dn_R V with V = mu_L - mu_R; dE_fb = dE_L + dE_R; the
// post-measurement branch state is pure, so dS^(nu) = S(sigma^(nu)(tau));
// I = -dS~ and eta = dS~_e / I. The switching work of the feedback step is
// identically zero for projective measurements and is not tracked.

namespace demon {

struct BranchThermo {
  double p = 0.0;
  std::array<double, 2> dn{0.0, 0.0};
  std::array<double, 2> dE{0.0, 0.0};
  std::array<double, 2> dQ{0.0, 0.0};
  double dS = 0.0;   // system entropy gained over the branch period
  double dSe = 0.0;  // sum_alpha beta_alpha dQ_alpha^(nu)
  OccupationVector sigma_end;
};

struct ThermoReport {
  double tau = 0.0;
  double current = 0.0;          // Ibar_m = dn_R / tau
  double power = 0.0;            // Pbar
  double feedback_energy = 0.0;  // dE_fb = dE_L + dE_R
  std::optional<double> gain;    // defined only for Pbar > 0 and dE_fb > 0
  std::array<double, 2> heat{0.0, 0.0};
  double heat_total = 0.0;
  double entropy_sys = 0.0;  // dS~ (measurement-averaged)
  double entropy_res = 0.0;  // dS~_e
  double information = 0.0;  // I = -dS~
  std::optional<double> efficiency;  // eta = dS~_e / I; undefined at I = 0
  double n_filled = 0.0;     // stationary filled probability
  double phi2 = 0.0;
  std::array<BranchThermo, 2> branch;  // indexed by Outcome
  std::array<double, 2> dn{0.0, 0.0};
  std::array<double, 2> dE{0.0, 0.0};
};

// -sum p ln p over the 2-vector; equals the von Neumann entropy because the
// coherence sector is identically zero.
double shannon_entropy(const OccupationVector& sigma);

ThermoReport thermo_report(double tau, const SystemConfig& cfg,
                           GeneratorKind kind = GeneratorKind::DCG,
                           const MomentOptions& opts = {});

// Assemble the report from precomputed moments (shared by sweeps). The
// coarse-grained generator guarantees the branch second law, so a violation
// throws; approximate moment sources (the tau^2 expansion outside its
// validity range) disable the check.
ThermoReport thermo_report_from(const MomentBundle& bundle, double tau,
                                const SystemConfig& cfg,
                                bool enforce_branch_second_law = true);

double electric_power(double tau, const SystemConfig& cfg,
                      GeneratorKind kind = GeneratorKind::DCG,
                      const MomentOptions& opts = {});
double feedback_energy(double tau, const SystemConfig& cfg,
                       GeneratorKind kind = GeneratorKind::DCG,
                       const MomentOptions& opts = {});
std::optional<double> gain(double tau, const SystemConfig& cfg,
                           GeneratorKind kind = GeneratorKind::DCG,
                           const MomentOptions& opts = {});

struct HeatFlows {
  double left = 0.0;
  double right = 0.0;
  double total = 0.0;
};
HeatFlows heat_flows(double tau, const SystemConfig& cfg,
                     GeneratorKind kind = GeneratorKind::DCG,
                     const MomentOptions& opts = {});

struct EntropyBalance {
  double entropy_sys = 0.0;
  double entropy_res = 0.0;
  double information = 0.0;
  std::optional<double> efficiency;
  std::array<double, 2> branch_dS{0.0, 0.0};
  std::array<double, 2> branch_dSe{0.0, 0.0};
};
EntropyBalance entropy_balance(double tau, const SystemConfig& cfg,
                               GeneratorKind kind = GeneratorKind::DCG,
                               const MomentOptions& opts = {});

}  // namespace demon
