#pragma once

#include <array>
#include <complex>

#include "demon/model.hpp"
#include "demon/quadrature.hpp"
#include "demon/thermo.hpp"

// Closed-form quantum-Zeno (tau -> 0) expansion. The one-period MGF is
// expanded to its lowest counting-field-dependent order, which is tau^2:
//   m(xi, tau) = tau^2 sum_alpha [ n0 g01^{alpha,F}(zeta) e^{+i chi}
//                                + (1-n0) g10^{alpha,E}(zeta) e^{-i chi} ]
// with flat-kernel coefficients
//   g10(zeta) = (1/2pi) int Gamma(w) f(w)     e^{-i zeta w} dw
//   g01(zeta) = (1/2pi) int Gamma(w) (1-f(w)) e^{+i zeta w} dw.
// The counting phases follow the Liouvillian convention (particles entering
// the reservoir carry e^{+i chi}), anchored by dn_L + dn_R = 0 at the Zeno
// fixed point.

namespace demon {

struct ZenoCoefficients {
  // indexed [reservoir][outcome]
  std::array<std::array<double, 2>, 2> g10{};  // (1/2pi) int Gamma f
  std::array<std::array<double, 2>, 2> g01{};  // (1/2pi) int Gamma (1-f)
  // Energy-weighted derivatives stored as the real moments -i d g/d zeta |_0:
  //   g10_w = -(1/2pi) int w Gamma f,   g01_w = +(1/2pi) int w Gamma (1-f).
  std::array<std::array<double, 2>, 2> g10_w{};
  std::array<std::array<double, 2>, 2> g01_w{};

  double g10_at(Reservoir r, Outcome v) const {
    return g10[static_cast<int>(r)][static_cast<int>(v)];
  }
  double g01_at(Reservoir r, Outcome v) const {
    return g01[static_cast<int>(r)][static_cast<int>(v)];
  }
  double g10_w_at(Reservoir r, Outcome v) const {
    return g10_w[static_cast<int>(r)][static_cast<int>(v)];
  }
  double g01_w_at(Reservoir r, Outcome v) const {
    return g01_w[static_cast<int>(r)][static_cast<int>(v)];
  }
};

// Throws CutoffRequired when an omega-weighted integral diverges: g10_w needs
// a finite omega_min (the Lorentzian tail against f -> 1), g01_w a finite
// omega_max.
ZenoCoefficients zeno_coefficients(const SystemConfig& cfg,
                                   const quad::Options& opts = {});

// tau -> 0 limit of the stroboscopic stationary filled probability.
// fixed_point comes from the order-tau^2 branch dynamics,
//   n0 = sum_a g10^{a,E} / (sum_a g10^{a,E} + sum_a g01^{a,F}),
// and is the primary value; printed_formula evaluates the published variant
// with g10^{a,F} in the denominator sum for comparison.
struct ZenoOccupation {
  double fixed_point = 0.0;
  double printed_formula = 0.0;
};
ZenoOccupation zeno_occupation(const SystemConfig& cfg,
                               const quad::Options& opts = {});

// Order-tau^2 MGF increment m(xi, tau); m(0, tau) is the total rate mass.
std::complex<double> zeno_mgf(double tau, const SystemConfig& cfg,
                              const CountingFields& xi,
                              const quad::Options& opts = {});

struct ZenoMoments {
  std::array<double, 2> dn{0.0, 0.0};
  std::array<double, 2> dE{0.0, 0.0};
};
ZenoMoments zeno_first_moments(double tau, const SystemConfig& cfg,
                               const quad::Options& opts = {});

// dE_fb = tau^2 sum_alpha [ n0 g01_w^{alpha,F} + (1-n0) g10_w^{alpha,E} ].
double zeno_feedback_energy(double tau, const SystemConfig& cfg,
                            const quad::Options& opts = {});

// Extremal-feedback sign criterion
//   Delta~ = int dw [ Gamma_R^F(w) w (1-f_R(w)) - Gamma_L^E(w) w f_L(w) ];
// negative signals the negative-feedback-energy regime. extremal_regime
// reports whether the suppressed couplings Gamma_L^F, Gamma_R^E are actually
// negligible; otherwise the value is advisory.
struct DeltaTilde {
  double value = 0.0;
  bool extremal_regime = false;
};
DeltaTilde delta_tilde(const SystemConfig& cfg, const quad::Options& opts = {});

// Dimensionless expansion validity annotation: the largest branch transition
// probability per period at order tau^2.
double zeno_smallness(double tau, const SystemConfig& cfg,
                      const quad::Options& opts = {});

// Full ledger assembled from the order-tau^2 branch dynamics, for sweep rows
// produced by the zeno solver.
ThermoReport zeno_thermo_report(double tau, const SystemConfig& cfg,
                                const quad::Options& opts = {});

}  // namespace demon
