#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "demon/errors.hpp"

// Physical configuration of the single-electron transistor and the elementary
// spectral functions. Working units: epsilon = hbar = k_B = 1; every energy in
// the configuration is expressed in units of the dot level epsilon.

namespace demon {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Reservoir : int { L = 0, R = 1 };

inline constexpr std::array<Reservoir, 2> kReservoirs{Reservoir::L, Reservoir::R};

inline const char* to_string(Reservoir r) { return r == Reservoir::L ? "L" : "R"; }

// Dot occupation found by the projective measurement: empty or filled.
enum class Outcome : int { Empty = 0, Filled = 1 };

inline constexpr std::array<Outcome, 2> kOutcomes{Outcome::Empty, Outcome::Filled};

inline const char* to_string(Outcome v) { return v == Outcome::Empty ? "E" : "F"; }

struct DotSpec {
  double epsilon = 1.0;  // on-site energy
};

// One lead: local thermal state (beta, mu) plus the Lorentzian spectral
// coupling density Gamma(w) = gamma0 * dw^2 / ((w - ec)^2 + dw^2) with hard
// cutoffs at [omega_min, omega_max] (may be -inf/+inf).
struct ReservoirSpec {
  Reservoir label = Reservoir::L;
  double beta = 1.0;         // inverse temperature, > 0
  double mu = 0.0;           // chemical potential
  double gamma0 = 0.5;       // base coupling strength
  double eps_center = 0.0;   // Lorentzian center
  double delta_width = 1.0;  // Lorentzian width, > 0
  double omega_min = -kInf;
  double omega_max = kInf;

  void validate() const {
    if (!(beta > 0.0)) throw ConfigError("reservoir beta must be > 0");
    if (!(delta_width > 0.0)) throw ConfigError("reservoir delta_width must be > 0");
    if (!(gamma0 >= 0.0)) throw ConfigError("reservoir gamma0 must be >= 0");
    if (!(omega_min < omega_max)) throw ConfigError("omega_min must be < omega_max");
  }
};

// Piecewise-constant feedback protocol: measure every tau, hold the
// outcome-conditioned couplings until the next measurement. delta = 0 turns
// the feedback off (both conditioned couplings coincide).
struct FeedbackProtocol {
  double tau = 1.0;    // feedback period, >= 0
  double delta = 0.0;  // feedback strength

  void validate() const {
    if (!(tau >= 0.0)) throw ConfigError("feedback tau must be >= 0");
    if (!std::isfinite(delta)) throw ConfigError("feedback delta must be finite");
  }
};

// Diagonal of the reduced dot density matrix, sigma = (rho_00, rho_11).
struct OccupationVector {
  double p_empty = 1.0;
  double p_filled = 0.0;

  double sum() const { return p_empty + p_filled; }
};

struct SystemConfig {
  DotSpec dot;
  ReservoirSpec left;   // label L
  ReservoirSpec right;  // label R
  FeedbackProtocol feedback;

  const ReservoirSpec& reservoir(Reservoir r) const {
    return r == Reservoir::L ? left : right;
  }
  ReservoirSpec& reservoir(Reservoir r) { return r == Reservoir::L ? left : right; }

  double bias() const { return left.mu - right.mu; }  // V = mu_L - mu_R

  void validate() const {
    if (!std::isfinite(dot.epsilon)) throw ConfigError("dot epsilon must be finite");
    if (left.label != Reservoir::L || right.label != Reservoir::R)
      throw ConfigError("reservoir labels must be L and R");
    left.validate();
    right.validate();
    feedback.validate();
  }
};

// Fermi occupation 1/(exp(beta (w - mu)) + 1), overflow-safe on both branches.
inline double fermi_occupation(double omega, const ReservoirSpec& res) {
  const double x = res.beta * (omega - res.mu);
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

// Feedback scaling of the base coupling: the demon opens the left barrier and
// closes the right one after an Empty outcome, and vice versa after Filled.
inline double coupling_scale(Reservoir r, Outcome v, const FeedbackProtocol& fb) {
  const double sign = ((r == Reservoir::L) == (v == Outcome::Empty)) ? +1.0 : -1.0;
  return std::exp(sign * fb.delta);
}

// Lorentzian spectral coupling density with hard support cutoffs,
// outcome-conditioned through coupling_scale.
inline double spectral_density(double omega, const ReservoirSpec& res, Outcome v,
                               const FeedbackProtocol& fb) {
  if (omega < res.omega_min || omega > res.omega_max) return 0.0;
  const double d2 = res.delta_width * res.delta_width;
  const double x = omega - res.eps_center;
  return res.gamma0 * coupling_scale(res.label, v, fb) * d2 / (x * x + d2);
}

// Finite integration window standing in for infinite cutoffs: the Fermi
// factors are flat/decayed beyond mu +- 40/beta and the Lorentzian mass sits
// within eps_center +- 50 delta_width; we take the union of the two.
inline std::pair<double, double> effective_support(const ReservoirSpec& res) {
  double lo = res.omega_min;
  double hi = res.omega_max;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    const double fermi_lo = res.mu - 40.0 / res.beta;
    const double fermi_hi = res.mu + 40.0 / res.beta;
    const double lor_lo = res.eps_center - 50.0 * res.delta_width;
    const double lor_hi = res.eps_center + 50.0 * res.delta_width;
    if (!std::isfinite(lo)) lo = std::min(fermi_lo, lor_lo);
    if (!std::isfinite(hi)) hi = std::max(fermi_hi, lor_hi);
  }
  return {lo, hi};
}

}  // namespace demon
