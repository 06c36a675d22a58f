#include "demon/feedback.hpp"

#include <cmath>
#include <sstream>

#include "demon/linalg2.hpp"

namespace demon {

namespace {

using cd = std::complex<double>;

constexpr double kDegenerateGap = 1e-10;
constexpr double kTraceTol = 1e-12;

OccupationVector to_occupation(const Eigen::Vector2cd& v) {
  OccupationVector s;
  s.p_empty = v(0).real();
  s.p_filled = v(1).real();
  if (std::abs(v(0).imag()) > 1e-10 || std::abs(v(1).imag()) > 1e-10)
    throw std::runtime_error("occupation vector acquired an imaginary part");
  if (std::abs(s.sum() - 1.0) > kTraceTol)
    throw std::runtime_error("occupation vector lost normalization");
  if (s.p_empty < 0.0) {
    if (s.p_empty < -1e-12) throw std::runtime_error("negative occupation");
    s.p_empty = 0.0;
    s.p_filled = 1.0;
  }
  if (s.p_filled < 0.0) {
    if (s.p_filled < -1e-12) throw std::runtime_error("negative occupation");
    s.p_filled = 0.0;
    s.p_empty = 1.0;
  }
  return s;
}

// All quadratures for one (tau, config): per outcome and reservoir the zeta=0
// rate, the finite-difference stencil and the analytic zeta-derivative.
struct RateTable {
  double tau = 0.0;
  double zeta_step = 0.0;
  GeneratorKind kind = GeneratorKind::DCG;
  // [outcome][reservoir]
  std::array<std::array<ReservoirRates, 2>, 2> rate{};
};

RateTable build_rate_table(double tau, const SystemConfig& cfg, GeneratorKind kind,
                           const MomentOptions& opts) {
  RateTable t;
  t.tau = tau;
  t.zeta_step = opts.zeta_step;
  t.kind = kind;
  for (Outcome v : kOutcomes)
    for (Reservoir r : kReservoirs) {
      const ReservoirSpec& res = cfg.reservoir(r);
      t.rate[static_cast<int>(v)][static_cast<int>(r)] =
          (kind == GeneratorKind::DCG)
              ? cg_rate_stencil(tau, res, v, cfg.feedback, cfg.dot, opts.zeta_step,
                                opts.quad)
              : bms_rate_stencil(res, v, cfg.feedback, cfg.dot, opts.zeta_step);
    }
  return t;
}

// zeta stencil index: 0 -> base, {-2,-1,+1,+2} -> at_step entries.
cd stencil_value(const RateStencil& s, int idx) {
  switch (idx) {
    case -2: return s.at_step[0];
    case -1: return s.at_step[1];
    case 0: return cd(s.base);
    case 1: return s.at_step[2];
    case 2: return s.at_step[3];
    default: throw std::logic_error("bad stencil index");
  }
}

Eigen::Matrix2cd liouv_from_table(const RateTable& t, Outcome v, double chi_L,
                                  double chi_R, int z_L, int z_R) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (Reservoir r : kReservoirs) {
    const ReservoirRates& rr = t.rate[static_cast<int>(v)][static_cast<int>(r)];
    const double chi = (r == Reservoir::L) ? chi_L : chi_R;
    const int zi = (r == Reservoir::L) ? z_L : z_R;
    m(0, 0) -= rr.g10.base;
    m(1, 1) -= rr.g01.base;
    m(0, 1) += stencil_value(rr.g01, zi) * std::exp(cd(0.0, +chi));
    m(1, 0) += stencil_value(rr.g10, zi) * std::exp(cd(0.0, -chi));
  }
  return m;
}

StationaryState stationary_from_branches(const Eigen::Matrix2cd& XE,
                                         const Eigen::Matrix2cd& XF, double tau) {
  const double a = XE(1, 0).real();  // empty -> filled over one period
  const double b = XF(0, 1).real();  // filled -> empty
  const double phi2 = 1.0 - a - b;
  if (std::abs(phi2 - 1.0) < kDegenerateGap)
    throw DegenerateFixedPoint(
        "stroboscopic map is bistable (phi_2 ~ 1); use the Zeno expansion");
  StationaryState s;
  s.tau = tau;
  s.relaxation_eigenvalue = phi2;
  s.sigma.p_empty = b / (a + b);
  s.sigma.p_filled = a / (a + b);
  return s;
}

// 4th-order central difference along one stencil of complex MGF values
// indexed {-2h, -h, +h, +2h}; the moment is Re[-i dM].
double moment_from_stencil(const std::array<cd, 4>& m, double h) {
  const cd d = (-m[3] + 8.0 * m[2] - 8.0 * m[1] + m[0]) / (12.0 * h);
  return (cd(0.0, -1.0) * d).real();
}

double rel_disagreement(double a, double b, double atol) {
  const double scale = std::max({std::abs(a), std::abs(b), atol});
  return std::abs(a - b) / scale;
}

}  // namespace

std::pair<Eigen::Matrix2d, Eigen::Matrix2d> measurement_projectors() {
  Eigen::Matrix2d pe = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d pf = Eigen::Matrix2d::Zero();
  pe(0, 0) = 1.0;
  pf(1, 1) = 1.0;
  return {pe, pf};
}

FeedbackPropagator feedback_propagator(double tau, const SystemConfig& cfg,
                                       const CountingFields& xi, GeneratorKind kind,
                                       const quad::Options& opts) {
  FeedbackPropagator f;
  f.tau = tau;
  f.xi = xi;
  f.kind = kind;
  if (tau == 0.0) return f;  // quantum-Zeno limit: identity, no quadrature

  const auto gen = [&](Outcome v) {
    return (kind == GeneratorKind::DCG) ? build_cg_liouvillian(tau, cfg, v, xi, opts)
                                        : bms_liouvillian(cfg, v, xi);
  };
  const Eigen::Matrix2cd XE = propagator(tau, gen(Outcome::Empty));
  const Eigen::Matrix2cd XF = propagator(tau, gen(Outcome::Filled));
  f.mat.col(0) = XE.col(0);
  f.mat.col(1) = XF.col(1);
  return f;
}

StationaryState stationary_state(double tau, const SystemConfig& cfg,
                                 GeneratorKind kind, const quad::Options& opts) {
  if (!(tau > 0.0))
    throw std::invalid_argument("stationary_state: tau must be > 0");
  const FeedbackPropagator f = feedback_propagator(tau, cfg, {}, kind, opts);
  return stationary_of_map(f.mat(1, 0).real(), f.mat(0, 1).real(), tau);
}

StationaryState stationary_of_map(double a, double b, double tau) {
  Eigen::Matrix2cd XE = Eigen::Matrix2cd::Zero(), XF = Eigen::Matrix2cd::Zero();
  XE(1, 0) = a;
  XF(0, 1) = b;
  return stationary_from_branches(XE, XF, tau);
}

std::complex<double> mgf_from(double tau, const SystemConfig& cfg,
                              const CountingFields& xi,
                              const OccupationVector& sigma0, GeneratorKind kind,
                              const quad::Options& opts) {
  const FeedbackPropagator f = feedback_propagator(tau, cfg, xi, kind, opts);
  const Eigen::Vector2cd s0(cd(sigma0.p_empty), cd(sigma0.p_filled));
  const Eigen::Vector2cd out = f.mat * s0;
  return out(0) + out(1);
}

std::complex<double> mgf(double tau, const SystemConfig& cfg,
                         const CountingFields& xi, GeneratorKind kind,
                         const quad::Options& opts) {
  const StationaryState ss = stationary_state(tau, cfg, kind, opts);
  return mgf_from(tau, cfg, xi, ss.sigma, kind, opts);
}

MomentBundle all_first_moments(double tau, const SystemConfig& cfg,
                               GeneratorKind kind, const MomentOptions& opts) {
  if (!(tau > 0.0))
    throw std::invalid_argument("all_first_moments: tau must be > 0");

  MomentBundle out;

  // Decoupled dot: every moment vanishes and any occupation is stationary;
  // report the symmetric convention instead of failing on the degenerate map.
  if (cfg.left.gamma0 == 0.0 && cfg.right.gamma0 == 0.0) {
    out.stationary.tau = tau;
    out.stationary.relaxation_eigenvalue = 1.0;
    out.stationary.sigma = {0.5, 0.5};
    out.total.p_branch = 1.0;
    for (Outcome v : kOutcomes) {
      const int i = static_cast<int>(v);
      out.branch[i].branch = v;
      out.branch[i].p_branch = 0.5;
      out.branch_final[i] =
          (v == Outcome::Empty) ? OccupationVector{1.0, 0.0} : OccupationVector{0.0, 1.0};
    }
    return out;
  }

  const RateTable table = build_rate_table(tau, cfg, kind, opts);

  const auto branch_exp = [&](Outcome v, double chi_L, double chi_R, int z_L,
                              int z_R) {
    return expm2(liouv_from_table(table, v, chi_L, chi_R, z_L, z_R) * tau);
  };

  const Eigen::Matrix2cd XE0 = branch_exp(Outcome::Empty, 0, 0, 0, 0);
  const Eigen::Matrix2cd XF0 = branch_exp(Outcome::Filled, 0, 0, 0, 0);
  out.stationary = stationary_from_branches(XE0, XF0, tau);
  const std::array<double, 2> p{out.stationary.sigma.p_empty,
                                out.stationary.sigma.p_filled};

  out.branch_final[0] = to_occupation(XE0.col(0));
  out.branch_final[1] = to_occupation(XF0.col(1));

  // Branch MGF at a stencil point: M_nu = (1,1) exp(L_nu(xi) tau) e_nu.
  const auto branch_mgf = [&](Outcome v, double chi_L, double chi_R, int z_L,
                              int z_R) {
    const Eigen::Matrix2cd X = branch_exp(v, chi_L, chi_R, z_L, z_R);
    const int col = static_cast<int>(v);
    return X(0, col) + X(1, col);
  };

  // Finite-difference moments, branch by branch, direction by direction.
  const std::array<double, 4> steps{-2.0, -1.0, 1.0, 2.0};
  for (Outcome v : kOutcomes) {
    const int vi = static_cast<int>(v);
    out.branch[vi].branch = v;
    out.branch[vi].p_branch = p[vi];
    for (Reservoir r : kReservoirs) {
      const int ri = static_cast<int>(r);
      std::array<cd, 4> m_chi{}, m_zeta{};
      for (int k = 0; k < 4; ++k) {
        const double s = steps[k] * opts.chi_step;
        m_chi[k] = branch_mgf(v, r == Reservoir::L ? s : 0.0,
                              r == Reservoir::R ? s : 0.0, 0, 0);
        const int zi = static_cast<int>(steps[k]);
        m_zeta[k] = branch_mgf(v, 0.0, 0.0, r == Reservoir::L ? zi : 0,
                               r == Reservoir::R ? zi : 0);
      }
      out.branch[vi].dn[ri] = moment_from_stencil(m_chi, opts.chi_step);
      out.branch[vi].dE[ri] = moment_from_stencil(m_zeta, opts.zeta_step);
    }
  }

  for (Reservoir r : kReservoirs) {
    const int ri = static_cast<int>(r);
    out.total.dn[ri] = p[0] * out.branch[0].dn[ri] + p[1] * out.branch[1].dn[ri];
    out.total.dE[ri] = p[0] * out.branch[0].dE[ri] + p[1] * out.branch[1].dE[ri];
  }

  // Analytic path: Frechet derivative of each branch exponential in the
  // direction of the counting-field derivative of the generator.
  if (opts.cross_check) {
    double worst = 0.0;
    for (Outcome v : kOutcomes) {
      const int vi = static_cast<int>(v);
      const Eigen::Matrix2cd A = liouv_from_table(table, v, 0, 0, 0, 0) * tau;
      for (Reservoir r : kReservoirs) {
        const int ri = static_cast<int>(r);
        const ReservoirRates& rr = table.rate[vi][ri];

        Eigen::Matrix2cd d_chi = Eigen::Matrix2cd::Zero();
        d_chi(0, 1) = cd(0.0, +1.0) * rr.g01.base;
        d_chi(1, 0) = cd(0.0, -1.0) * rr.g10.base;

        Eigen::Matrix2cd d_zeta = Eigen::Matrix2cd::Zero();
        d_zeta(0, 1) = rr.g01.dzeta;
        d_zeta(1, 0) = rr.g10.dzeta;

        const int col = static_cast<int>(v);
        const auto deriv = [&](const Eigen::Matrix2cd& dir) {
          const auto [X, D] = expm2_frechet(A, dir * tau);
          (void)X;
          const cd dM = D(0, col) + D(1, col);
          return (cd(0.0, -1.0) * dM).real();
        };
        const double dn_an = deriv(d_chi);
        const double dE_an = deriv(d_zeta);
        worst = std::max(worst, rel_disagreement(out.branch[vi].dn[ri], dn_an,
                                                 opts.cross_atol));
        worst = std::max(worst, rel_disagreement(out.branch[vi].dE[ri], dE_an,
                                                 opts.cross_atol));
      }
    }
    out.max_cross_disagreement = worst;
    if (worst > opts.cross_rtol) {
      std::ostringstream msg;
      msg << "finite-difference and analytic moment paths disagree by " << worst
          << " (relative, tol " << opts.cross_rtol << ") at tau = " << tau;
      throw MomentToleranceFailure(msg.str());
    }
  }

  return out;
}

FCSMoments fcs_first_moments(double tau, const SystemConfig& cfg,
                             std::optional<Outcome> conditioned, GeneratorKind kind,
                             const MomentOptions& opts) {
  const MomentBundle bundle = all_first_moments(tau, cfg, kind, opts);
  if (conditioned) return bundle.branch[static_cast<int>(*conditioned)];
  return bundle.total;
}

double time_averaged_current(double tau, const SystemConfig& cfg, GeneratorKind kind,
                             const MomentOptions& opts) {
  if (!(tau > 0.0))
    throw std::invalid_argument("time_averaged_current: tau must be > 0");
  const MomentBundle bundle = all_first_moments(tau, cfg, kind, opts);
  const double dn_L = bundle.total.dn_of(Reservoir::L);
  const double dn_R = bundle.total.dn_of(Reservoir::R);
  if (std::abs(dn_L + dn_R) > 1e-9) {
    std::ostringstream msg;
    msg << "stroboscopic particle conservation violated: dn_L + dn_R = "
        << dn_L + dn_R;
    throw ConservationViolation(msg.str());
  }
  return dn_R / tau;
}

}  // namespace demon
