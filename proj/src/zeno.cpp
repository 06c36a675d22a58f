#include "demon/zeno.hpp"

#include <cmath>
#include <sstream>

namespace demon {

namespace {

using cd = std::complex<double>;

std::vector<double> flat_breakpoints(const ReservoirSpec& res) {
  const auto [lo, hi] = effective_support(res);
  return quad::clip_breakpoints(lo, hi, {res.mu, res.eps_center});
}

// (1/2pi) int Gamma^nu(w) f(w) e^{-i zeta w} dw over the general window.
cd g10_integral(const SystemConfig& cfg, Reservoir r, Outcome v, double zeta,
                const quad::Options& opts) {
  const ReservoirSpec& res = cfg.reservoir(r);
  if (res.gamma0 == 0.0) return {};
  const auto f = [&](double w) {
    return spectral_density(w, res, v, cfg.feedback) * fermi_occupation(w, res) *
           std::exp(cd(0.0, -zeta * w)) / (2.0 * M_PI);
  };
  return quad::integrate(f, flat_breakpoints(res), opts).value;
}

cd g01_integral(const SystemConfig& cfg, Reservoir r, Outcome v, double zeta,
                const quad::Options& opts) {
  const ReservoirSpec& res = cfg.reservoir(r);
  if (res.gamma0 == 0.0) return {};
  const auto f = [&](double w) {
    return spectral_density(w, res, v, cfg.feedback) *
           (1.0 - fermi_occupation(w, res)) * std::exp(cd(0.0, +zeta * w)) /
           (2.0 * M_PI);
  };
  return quad::integrate(f, flat_breakpoints(res), opts).value;
}

void require_finite_cutoff(const ReservoirSpec& res, bool need_min, const char* what) {
  if (res.gamma0 == 0.0) return;
  const double bound = need_min ? res.omega_min : res.omega_max;
  if (!std::isfinite(bound)) {
    std::ostringstream msg;
    msg << what << " diverges for reservoir " << to_string(res.label)
        << ": the omega-weighted Lorentzian tail needs a finite "
        << (need_min ? "omega_min" : "omega_max");
    throw CutoffRequired(msg.str());
  }
}

// Real omega-weighted moments -(1/2pi) int w Gamma f and +(1/2pi) int w Gamma (1-f).
double g10_weighted(const SystemConfig& cfg, Reservoir r, Outcome v,
                    const quad::Options& opts) {
  const ReservoirSpec& res = cfg.reservoir(r);
  if (res.gamma0 == 0.0) return 0.0;
  require_finite_cutoff(res, true, "g10 energy weight");
  const auto f = [&](double w) {
    return cd(w * spectral_density(w, res, v, cfg.feedback) *
              fermi_occupation(w, res) / (2.0 * M_PI));
  };
  return -quad::integrate(f, flat_breakpoints(res), opts).value.real();
}

double g01_weighted(const SystemConfig& cfg, Reservoir r, Outcome v,
                    const quad::Options& opts) {
  const ReservoirSpec& res = cfg.reservoir(r);
  if (res.gamma0 == 0.0) return 0.0;
  require_finite_cutoff(res, false, "g01 energy weight");
  const auto f = [&](double w) {
    return cd(w * spectral_density(w, res, v, cfg.feedback) *
              (1.0 - fermi_occupation(w, res)) / (2.0 * M_PI));
  };
  return +quad::integrate(f, flat_breakpoints(res), opts).value.real();
}

struct UnweightedG {
  std::array<std::array<double, 2>, 2> g10{}, g01{};
};

UnweightedG unweighted_g(const SystemConfig& cfg, const quad::Options& opts) {
  UnweightedG g;
  for (Reservoir r : kReservoirs)
    for (Outcome v : kOutcomes) {
      g.g10[static_cast<int>(r)][static_cast<int>(v)] =
          g10_integral(cfg, r, v, 0.0, opts).real();
      g.g01[static_cast<int>(r)][static_cast<int>(v)] =
          g01_integral(cfg, r, v, 0.0, opts).real();
    }
  return g;
}

ZenoOccupation occupation_from(const UnweightedG& g) {
  const int E = static_cast<int>(Outcome::Empty);
  const int F = static_cast<int>(Outcome::Filled);
  ZenoOccupation out;
  const double in_E = g.g10[0][E] + g.g10[1][E];
  const double out_F = g.g01[0][F] + g.g01[1][F];
  out.fixed_point = (in_E + out_F > 0.0) ? in_E / (in_E + out_F) : 0.5;
  const double in_F = g.g10[0][F] + g.g10[1][F];
  out.printed_formula = (in_F + out_F > 0.0) ? in_F / (in_F + out_F) : 0.5;
  return out;
}

}  // namespace

ZenoCoefficients zeno_coefficients(const SystemConfig& cfg,
                                   const quad::Options& opts) {
  ZenoCoefficients out;
  for (Reservoir r : kReservoirs)
    for (Outcome v : kOutcomes) {
      const int ri = static_cast<int>(r);
      const int vi = static_cast<int>(v);
      out.g10[ri][vi] = g10_integral(cfg, r, v, 0.0, opts).real();
      out.g01[ri][vi] = g01_integral(cfg, r, v, 0.0, opts).real();
      out.g10_w[ri][vi] = g10_weighted(cfg, r, v, opts);
      out.g01_w[ri][vi] = g01_weighted(cfg, r, v, opts);
    }
  return out;
}

ZenoOccupation zeno_occupation(const SystemConfig& cfg, const quad::Options& opts) {
  return occupation_from(unweighted_g(cfg, opts));
}

std::complex<double> zeno_mgf(double tau, const SystemConfig& cfg,
                              const CountingFields& xi, const quad::Options& opts) {
  const double n0 = zeno_occupation(cfg, opts).fixed_point;
  cd m{0.0, 0.0};
  for (Reservoir r : kReservoirs) {
    const double chi = xi.chi(r);
    const double zeta = xi.zeta(r);
    m += n0 * g01_integral(cfg, r, Outcome::Filled, zeta, opts) *
         std::exp(cd(0.0, +chi));
    m += (1.0 - n0) * g10_integral(cfg, r, Outcome::Empty, zeta, opts) *
         std::exp(cd(0.0, -chi));
  }
  return tau * tau * m;
}

ZenoMoments zeno_first_moments(double tau, const SystemConfig& cfg,
                               const quad::Options& opts) {
  const UnweightedG g = unweighted_g(cfg, opts);
  const double n0 = occupation_from(g).fixed_point;
  const int E = static_cast<int>(Outcome::Empty);
  const int F = static_cast<int>(Outcome::Filled);
  ZenoMoments out;
  for (Reservoir r : kReservoirs) {
    const int ri = static_cast<int>(r);
    out.dn[ri] = tau * tau * (n0 * g.g01[ri][F] - (1.0 - n0) * g.g10[ri][E]);
    out.dE[ri] = tau * tau *
                 (n0 * g01_weighted(cfg, r, Outcome::Filled, opts) +
                  (1.0 - n0) * g10_weighted(cfg, r, Outcome::Empty, opts));
  }
  return out;
}

double zeno_feedback_energy(double tau, const SystemConfig& cfg,
                            const quad::Options& opts) {
  const ZenoMoments m = zeno_first_moments(tau, cfg, opts);
  return m.dE[0] + m.dE[1];
}

DeltaTilde delta_tilde(const SystemConfig& cfg, const quad::Options& opts) {
  DeltaTilde out;
  const ReservoirSpec& rr = cfg.right;
  const ReservoirSpec& rl = cfg.left;

  if (rr.gamma0 != 0.0) {
    require_finite_cutoff(rr, false, "Delta~ right term");
    const auto f = [&](double w) {
      return cd(w * spectral_density(w, rr, Outcome::Filled, cfg.feedback) *
                (1.0 - fermi_occupation(w, rr)));
    };
    out.value += quad::integrate(f, flat_breakpoints(rr), opts).value.real();
  }
  if (rl.gamma0 != 0.0) {
    require_finite_cutoff(rl, true, "Delta~ left term");
    const auto f = [&](double w) {
      return cd(w * spectral_density(w, rl, Outcome::Empty, cfg.feedback) *
                fermi_occupation(w, rl));
    };
    out.value -= quad::integrate(f, flat_breakpoints(rl), opts).value.real();
  }

  // Gamma_L^F and Gamma_R^E are suppressed by e^{-delta} relative to the
  // enhanced couplings; treat them as negligible below 1e-6 relative.
  const double suppression = std::exp(-2.0 * cfg.feedback.delta);
  out.extremal_regime = (rl.gamma0 == 0.0 && rr.gamma0 == 0.0) || suppression < 1e-6;
  return out;
}

double zeno_smallness(double tau, const SystemConfig& cfg,
                      const quad::Options& opts) {
  const UnweightedG g = unweighted_g(cfg, opts);
  double worst = 0.0;
  for (Outcome v : kOutcomes) {
    const int vi = static_cast<int>(v);
    double total = 0.0;
    for (int ri = 0; ri < 2; ++ri) total += g.g10[ri][vi] + g.g01[ri][vi];
    worst = std::max(worst, total);
  }
  return worst * tau * tau;
}

ThermoReport zeno_thermo_report(double tau, const SystemConfig& cfg,
                                const quad::Options& opts) {
  const UnweightedG g = unweighted_g(cfg, opts);
  const double n0 = occupation_from(g).fixed_point;
  const int E = static_cast<int>(Outcome::Empty);
  const int F = static_cast<int>(Outcome::Filled);

  MomentBundle bundle;
  bundle.stationary.tau = tau;
  bundle.stationary.sigma = {1.0 - n0, n0};
  bundle.stationary.relaxation_eigenvalue =
      1.0 - tau * tau * (g.g10[0][E] + g.g10[1][E] + g.g01[0][F] + g.g01[1][F]);

  const double t2 = tau * tau;
  for (Outcome v : kOutcomes) {
    const int vi = static_cast<int>(v);
    FCSMoments& b = bundle.branch[vi];
    b.branch = v;
    b.p_branch = (v == Outcome::Empty) ? 1.0 - n0 : n0;
    for (Reservoir r : kReservoirs) {
      const int ri = static_cast<int>(r);
      if (v == Outcome::Empty) {
        b.dn[ri] = -t2 * g.g10[ri][E];
        b.dE[ri] = t2 * g10_weighted(cfg, r, Outcome::Empty, opts);
      } else {
        b.dn[ri] = +t2 * g.g01[ri][F];
        b.dE[ri] = t2 * g01_weighted(cfg, r, Outcome::Filled, opts);
      }
    }
    // order-tau^2 branch propagation of the pure post-measurement state
    const double esc = (v == Outcome::Empty) ? t2 * (g.g10[0][E] + g.g10[1][E])
                                             : t2 * (g.g01[0][F] + g.g01[1][F]);
    const double stay = std::max(0.0, 1.0 - esc);
    bundle.branch_final[vi] = (v == Outcome::Empty)
                                  ? OccupationVector{stay, 1.0 - stay}
                                  : OccupationVector{1.0 - stay, stay};
  }
  for (int ri = 0; ri < 2; ++ri) {
    bundle.total.dn[ri] = bundle.branch[E].p_branch * bundle.branch[E].dn[ri] +
                          bundle.branch[F].p_branch * bundle.branch[F].dn[ri];
    bundle.total.dE[ri] = bundle.branch[E].p_branch * bundle.branch[E].dE[ri] +
                          bundle.branch[F].p_branch * bundle.branch[F].dE[ri];
  }
  return thermo_report_from(bundle, tau, cfg, false);
}

}  // namespace demon
