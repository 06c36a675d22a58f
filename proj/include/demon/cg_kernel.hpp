#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "demon/model.hpp"
#include "demon/quadrature.hpp"

// Dynamical coarse-graining rates and the 2x2 counting-field Liouvillian.
//
// Rates are the sinc^2-kernel spectral integrals
//   gamma10^t(zeta) = (t/2pi) int K_t(w) Gamma^nu(w) f(w)      e^{-i zeta w} dw
//   gamma01^t(zeta) = (t/2pi) int K_t(w) Gamma^nu(w) (1-f(w))  e^{+i zeta w} dw
// with K_t(w) = sinc^2[(t/2)(w - eps)]. This is the w -> -w substituted form
// of the published gamma10 integral; the two parameterizations are identical
// and the test suite checks them against each other numerically.
//
// Counting convention: chi/zeta count particles/energy ENTERING reservoir
// alpha. The (empty,filled) entry carries gamma01(zeta) e^{+i chi} (dot
// empties, one electron of energy ~w enters the lead), the (filled,empty)
// entry gamma10(zeta) e^{-i chi}. The stroboscopic conservation law
// dn_L + dn_R + d<n_d> = 0 anchors this sign choice.

namespace demon {

struct CountingFields {
  double chi_L = 0.0, chi_R = 0.0;
  double zeta_L = 0.0, zeta_R = 0.0;

  double chi(Reservoir r) const { return r == Reservoir::L ? chi_L : chi_R; }
  double zeta(Reservoir r) const { return r == Reservoir::L ? zeta_L : zeta_R; }
  double& chi(Reservoir r) { return r == Reservoir::L ? chi_L : chi_R; }
  double& zeta(Reservoir r) { return r == Reservoir::L ? zeta_L : zeta_R; }
  bool is_zero() const {
    return chi_L == 0.0 && chi_R == 0.0 && zeta_L == 0.0 && zeta_R == 0.0;
  }
};

enum class GeneratorKind { DCG, BMS };

inline const char* to_string(GeneratorKind k) {
  return k == GeneratorKind::DCG ? "dcg" : "bms";
}

struct CGRatePair {
  std::complex<double> gamma10{0.0, 0.0};  // empty -> filled
  std::complex<double> gamma01{0.0, 0.0};  // filled -> empty
};

struct CGLiouvillian {
  Eigen::Matrix2cd mat = Eigen::Matrix2cd::Zero();
  double eval_time = 0.0;  // kernel time t (DCG); ignored for BMS
  CountingFields fields;
  GeneratorKind kind = GeneratorKind::DCG;
};

// Initial panel edges for the rate integrals: support cutoffs, sinc^2 zeros
// w = eps + 2 pi k / t, chemical potential, Lorentzian center, kernel peak.
// Throws QuadratureFailure if the zero count alone exceeds max_points.
std::vector<double> rate_breakpoints(double t, const ReservoirSpec& res,
                                     const DotSpec& dot, int max_points = 10000);

CGRatePair cg_rates(double t, const ReservoirSpec& res, Outcome v,
                    const FeedbackProtocol& fb, const DotSpec& dot,
                    double zeta = 0.0, const quad::Options& opts = {});

// d gamma / d zeta at zeta = 0 (pure imaginary: -i/+i times the real
// omega-weighted rate mass). Validates the finite-difference energy moments.
CGRatePair cg_rate_energy_weighted(double t, const ReservoirSpec& res, Outcome v,
                                   const FeedbackProtocol& fb, const DotSpec& dot,
                                   const quad::Options& opts = {});

// Bundle used by the moment pipeline: the zeta = 0 value, the four-point
// central-difference stencil at +-h, +-2h, and the analytic zeta-derivative,
// all evaluated on one shared adaptive panel set per rate.
struct RateStencil {
  double base = 0.0;                                     // gamma(0)
  std::array<std::complex<double>, 4> at_step{};         // -2h, -h, +h, +2h
  std::complex<double> dzeta{0.0, 0.0};                  // d gamma/d zeta |_0
};

struct ReservoirRates {
  RateStencil g10;
  RateStencil g01;
};

ReservoirRates cg_rate_stencil(double t, const ReservoirSpec& res, Outcome v,
                               const FeedbackProtocol& fb, const DotSpec& dot,
                               double zeta_step, const quad::Options& opts = {});

// BMS limit: rates pinned at the dot energy, all transferred quanta carry
// energy eps (counting phases e^{+-i zeta eps}). Closed form, no quadrature.
CGRatePair bms_rates(const ReservoirSpec& res, Outcome v, const FeedbackProtocol& fb,
                     const DotSpec& dot, double zeta = 0.0);
ReservoirRates bms_rate_stencil(const ReservoirSpec& res, Outcome v,
                                const FeedbackProtocol& fb, const DotSpec& dot,
                                double zeta_step);

CGLiouvillian build_cg_liouvillian(double t, const SystemConfig& cfg, Outcome v,
                                   const CountingFields& xi,
                                   const quad::Options& opts = {});
CGLiouvillian bms_liouvillian(const SystemConfig& cfg, Outcome v,
                              const CountingFields& xi);

// exp(L t). For DCG generators enforces the self-consistency precondition
// that the kernel time equals the exponent time.
Eigen::Matrix2cd propagator(double t, const CGLiouvillian& L);

}  // namespace demon
