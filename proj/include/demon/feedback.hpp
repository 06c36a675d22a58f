#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <utility>

#include "demon/cg_kernel.hpp"

// Piecewise-constant feedback: projective dot measurement every tau, then
// outcome-conditioned evolution. One-period propagator
//   F^tau(xi) = exp(L_E^tau(xi) tau) P_E + exp(L_F^tau(xi) tau) P_F,
// stroboscopic stationary state, moment generating function and the first
// particle/energy moments per period.

namespace demon {

// P_E = diag(1,0), P_F = diag(0,1); P_E + P_F = identity.
std::pair<Eigen::Matrix2d, Eigen::Matrix2d> measurement_projectors();

struct FeedbackPropagator {
  Eigen::Matrix2cd mat = Eigen::Matrix2cd::Identity();
  double tau = 0.0;
  CountingFields xi;
  GeneratorKind kind = GeneratorKind::DCG;
};

FeedbackPropagator feedback_propagator(double tau, const SystemConfig& cfg,
                                       const CountingFields& xi,
                                       GeneratorKind kind = GeneratorKind::DCG,
                                       const quad::Options& opts = {});

struct StationaryState {
  OccupationVector sigma;
  double relaxation_eigenvalue = 0.0;  // phi_2; phi_1 = 1 by construction
  double tau = 0.0;
};

// Fixed point of F^tau(0). Throws DegenerateFixedPoint when |phi_2 - 1| <
// 1e-10 (bistable Zeno regime; use the zeno module instead).
StationaryState stationary_state(double tau, const SystemConfig& cfg,
                                 GeneratorKind kind = GeneratorKind::DCG,
                                 const quad::Options& opts = {});

// Fixed point of the column-stochastic map ((1-a, b), (a, 1-b)):
// sigma_s = (b, a)/(a+b), phi_2 = 1 - a - b.
StationaryState stationary_of_map(double a, double b, double tau = 0.0);

// M(tau, xi) = (1,1) F^tau(xi) sigma_s.
std::complex<double> mgf(double tau, const SystemConfig& cfg,
                         const CountingFields& xi,
                         GeneratorKind kind = GeneratorKind::DCG,
                         const quad::Options& opts = {});

// Same MGF started from an arbitrary occupation (conservation anchoring).
std::complex<double> mgf_from(double tau, const SystemConfig& cfg,
                              const CountingFields& xi,
                              const OccupationVector& sigma0,
                              GeneratorKind kind = GeneratorKind::DCG,
                              const quad::Options& opts = {});

struct FCSMoments {
  std::array<double, 2> dn{0.0, 0.0};  // particles entering reservoir [L, R]
  std::array<double, 2> dE{0.0, 0.0};  // energy entering reservoir [L, R]
  std::optional<Outcome> branch;       // set for conditioned moments
  double p_branch = 1.0;

  double dn_of(Reservoir r) const { return dn[static_cast<int>(r)]; }
  double dE_of(Reservoir r) const { return dE[static_cast<int>(r)]; }
};

struct MomentOptions {
  double chi_step = 1e-4;
  double zeta_step = 1e-4;
  quad::Options quad{1e-12, 10000};
  // Finite differences are the default evaluation; the analytic
  // weighted-rate path is a mandatory cross-check and disagreement beyond
  // cross_rtol is an error.
  bool cross_check = true;
  double cross_rtol = 1e-5;
  double cross_atol = 1e-12;
};

struct MomentBundle {
  StationaryState stationary;
  FCSMoments total;
  std::array<FCSMoments, 2> branch;             // indexed by Outcome
  std::array<OccupationVector, 2> branch_final;  // sigma^{(nu)}(tau)
  double max_cross_disagreement = 0.0;
};

// Full stationary moment set for one (tau, config): all quadratures are done
// once and shared between the stencil evaluations and the analytic path.
MomentBundle all_first_moments(double tau, const SystemConfig& cfg,
                               GeneratorKind kind = GeneratorKind::DCG,
                               const MomentOptions& opts = {});

FCSMoments fcs_first_moments(double tau, const SystemConfig& cfg,
                             std::optional<Outcome> conditioned = {},
                             GeneratorKind kind = GeneratorKind::DCG,
                             const MomentOptions& opts = {});

// Ibar_m = dn_R / tau after asserting |dn_L + dn_R| < 1e-9.
double time_averaged_current(double tau, const SystemConfig& cfg,
                             GeneratorKind kind = GeneratorKind::DCG,
                             const MomentOptions& opts = {});

}  // namespace demon
