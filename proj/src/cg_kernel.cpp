#include "demon/cg_kernel.hpp"

#include <cmath>
#include <sstream>

#include "demon/linalg2.hpp"

namespace demon {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

struct RateIntegrandCtx {
  double t;
  double eps;
  ReservoirSpec res;
  Outcome v;
  FeedbackProtocol fb;

  double kernel(double w) const {
    const double s = sinc(0.5 * t * (w - eps));
    return t / (2.0 * M_PI) * s * s;
  }
  double weight10(double w) const {  // Gamma(w) f(w)
    return spectral_density(w, res, v, fb) * fermi_occupation(w, res);
  }
  double weight01(double w) const {  // Gamma(w) (1 - f(w))
    return spectral_density(w, res, v, fb) * (1.0 - fermi_occupation(w, res));
  }
};

bool coupling_vanishes(const ReservoirSpec& res) { return res.gamma0 == 0.0; }

}  // namespace

std::vector<double> rate_breakpoints(double t, const ReservoirSpec& res,
                                     const DotSpec& dot, int max_points) {
  const auto [lo, hi] = effective_support(res);
  std::vector<double> interior{res.mu, res.eps_center, dot.epsilon};
  if (t > 0.0) {
    const double spacing = 2.0 * M_PI / t;
    const double n_zeros = (hi - lo) / spacing;
    if (n_zeros > static_cast<double>(max_points)) {
      std::ostringstream msg;
      msg << "sinc^2 kernel needs ~" << static_cast<long long>(n_zeros)
          << " oscillation panels on [" << lo << ", " << hi << "], budget "
          << max_points;
      throw QuadratureFailure(msg.str());
    }
    const long k_lo = static_cast<long>(std::ceil((lo - dot.epsilon) / spacing));
    const long k_hi = static_cast<long>(std::floor((hi - dot.epsilon) / spacing));
    for (long k = k_lo; k <= k_hi; ++k) {
      if (k == 0) continue;
      interior.push_back(dot.epsilon + spacing * static_cast<double>(k));
    }
  }
  return quad::clip_breakpoints(lo, hi, interior);
}

CGRatePair cg_rates(double t, const ReservoirSpec& res, Outcome v,
                    const FeedbackProtocol& fb, const DotSpec& dot, double zeta,
                    const quad::Options& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("cg_rates: t must be > 0");
  if (coupling_vanishes(res)) return {};

  const RateIntegrandCtx ctx{t, dot.epsilon, res, v, fb};
  const auto pts = rate_breakpoints(t, res, dot, opts.max_intervals);
  using cd = std::complex<double>;

  const auto r10 = quad::integrate(
      [&ctx, zeta](double w) {
        return ctx.kernel(w) * ctx.weight10(w) * std::exp(cd(0.0, -zeta * w));
      },
      pts, opts);
  const auto r01 = quad::integrate(
      [&ctx, zeta](double w) {
        return ctx.kernel(w) * ctx.weight01(w) * std::exp(cd(0.0, +zeta * w));
      },
      pts, opts);
  return {r10.value, r01.value};
}

CGRatePair cg_rate_energy_weighted(double t, const ReservoirSpec& res, Outcome v,
                                   const FeedbackProtocol& fb, const DotSpec& dot,
                                   const quad::Options& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("cg_rate_energy_weighted: t must be > 0");
  if (coupling_vanishes(res)) return {};

  const RateIntegrandCtx ctx{t, dot.epsilon, res, v, fb};
  const auto pts = rate_breakpoints(t, res, dot, opts.max_intervals);
  using cd = std::complex<double>;

  const auto r10 = quad::integrate(
      [&ctx](double w) { return cd(0.0, -w) * ctx.kernel(w) * ctx.weight10(w); },
      pts, opts);
  const auto r01 = quad::integrate(
      [&ctx](double w) { return cd(0.0, +w) * ctx.kernel(w) * ctx.weight01(w); },
      pts, opts);
  return {r10.value, r01.value};
}

namespace {

RateStencil stencil_from_family(const quad::FamilyResult& fam) {
  RateStencil out;
  out.base = fam.values[0].real();
  for (int i = 0; i < 4; ++i) out.at_step[i] = fam.values[1 + i];
  out.dzeta = fam.values[5];
  return out;
}

}  // namespace

ReservoirRates cg_rate_stencil(double t, const ReservoirSpec& res, Outcome v,
                               const FeedbackProtocol& fb, const DotSpec& dot,
                               double zeta_step, const quad::Options& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("cg_rate_stencil: t must be > 0");
  ReservoirRates out;
  if (coupling_vanishes(res)) return out;

  const RateIntegrandCtx ctx{t, dot.epsilon, res, v, fb};
  const auto pts = rate_breakpoints(t, res, dot, opts.max_intervals);
  using cd = std::complex<double>;
  const std::array<double, 4> steps{-2.0 * zeta_step, -zeta_step, zeta_step,
                                    2.0 * zeta_step};

  auto family_for = [&](auto weight, double phase_sign) {
    std::vector<quad::Integrand> fs;
    fs.push_back([&ctx, weight](double w) { return cd(ctx.kernel(w) * weight(w)); });
    for (double s : steps)
      fs.push_back([&ctx, weight, s, phase_sign](double w) {
        return ctx.kernel(w) * weight(w) * std::exp(cd(0.0, phase_sign * s * w));
      });
    fs.push_back([&ctx, weight, phase_sign](double w) {
      return cd(0.0, phase_sign * w) * ctx.kernel(w) * weight(w);
    });
    return quad::integrate_family(fs, pts, opts);
  };

  out.g10 = stencil_from_family(
      family_for([&ctx](double w) { return ctx.weight10(w); }, -1.0));
  out.g01 = stencil_from_family(
      family_for([&ctx](double w) { return ctx.weight01(w); }, +1.0));
  return out;
}

CGRatePair bms_rates(const ReservoirSpec& res, Outcome v, const FeedbackProtocol& fb,
                     const DotSpec& dot, double zeta) {
  const double g = spectral_density(dot.epsilon, res, v, fb);
  const double f = fermi_occupation(dot.epsilon, res);
  using cd = std::complex<double>;
  CGRatePair out;
  out.gamma10 = g * f * std::exp(cd(0.0, -zeta * dot.epsilon));
  out.gamma01 = g * (1.0 - f) * std::exp(cd(0.0, +zeta * dot.epsilon));
  return out;
}

ReservoirRates bms_rate_stencil(const ReservoirSpec& res, Outcome v,
                                const FeedbackProtocol& fb, const DotSpec& dot,
                                double zeta_step) {
  ReservoirRates out;
  const std::array<double, 4> steps{-2.0 * zeta_step, -zeta_step, zeta_step,
                                    2.0 * zeta_step};
  const CGRatePair base = bms_rates(res, v, fb, dot, 0.0);
  out.g10.base = base.gamma10.real();
  out.g01.base = base.gamma01.real();
  for (int i = 0; i < 4; ++i) {
    const CGRatePair r = bms_rates(res, v, fb, dot, steps[i]);
    out.g10.at_step[i] = r.gamma10;
    out.g01.at_step[i] = r.gamma01;
  }
  using cd = std::complex<double>;
  out.g10.dzeta = cd(0.0, -dot.epsilon) * base.gamma10;
  out.g01.dzeta = cd(0.0, +dot.epsilon) * base.gamma01;
  return out;
}

namespace {

void add_reservoir_block(Eigen::Matrix2cd& m, const CGRatePair& at_zeta,
                         const CGRatePair& at_zero, double chi) {
  using cd = std::complex<double>;
  m(0, 0) -= at_zero.gamma10.real();
  m(1, 1) -= at_zero.gamma01.real();
  m(0, 1) += at_zeta.gamma01 * std::exp(cd(0.0, +chi));
  m(1, 0) += at_zeta.gamma10 * std::exp(cd(0.0, -chi));
}

}  // namespace

CGLiouvillian build_cg_liouvillian(double t, const SystemConfig& cfg, Outcome v,
                                   const CountingFields& xi,
                                   const quad::Options& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("build_cg_liouvillian: t must be > 0");
  CGLiouvillian L;
  L.eval_time = t;
  L.fields = xi;
  L.kind = GeneratorKind::DCG;
  for (Reservoir r : kReservoirs) {
    const ReservoirSpec& res = cfg.reservoir(r);
    const CGRatePair at_zero = cg_rates(t, res, v, cfg.feedback, cfg.dot, 0.0, opts);
    const double z = xi.zeta(r);
    const CGRatePair at_zeta =
        (z == 0.0) ? at_zero : cg_rates(t, res, v, cfg.feedback, cfg.dot, z, opts);
    add_reservoir_block(L.mat, at_zeta, at_zero, xi.chi(r));
  }
  return L;
}

CGLiouvillian bms_liouvillian(const SystemConfig& cfg, Outcome v,
                              const CountingFields& xi) {
  CGLiouvillian L;
  L.eval_time = 0.0;
  L.fields = xi;
  L.kind = GeneratorKind::BMS;
  for (Reservoir r : kReservoirs) {
    const ReservoirSpec& res = cfg.reservoir(r);
    const CGRatePair at_zero = bms_rates(res, v, cfg.feedback, cfg.dot, 0.0);
    const CGRatePair at_zeta = bms_rates(res, v, cfg.feedback, cfg.dot, xi.zeta(r));
    add_reservoir_block(L.mat, at_zeta, at_zero, xi.chi(r));
  }
  return L;
}

Eigen::Matrix2cd propagator(double t, const CGLiouvillian& L) {
  if (t == 0.0) return Eigen::Matrix2cd::Identity();
  if (L.kind == GeneratorKind::DCG) {
    // DCG self-consistency: the kernel time must equal the exponent time.
    if (std::abs(t - L.eval_time) > 1e-9 * std::max(1.0, std::abs(t)))
      throw std::logic_error("propagator: DCG generator built at different time");
  }
  return expm2(L.mat * t);
}

}  // namespace demon
