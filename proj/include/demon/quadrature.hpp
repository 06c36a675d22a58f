#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "demon/errors.hpp"

// Adaptive panel quadrature for the oscillatory sinc^2-kernel spectral
// integrals. Panels start from caller-supplied breakpoints (kernel zeros,
// support cutoffs, chemical potentials) and are bisected worst-first using an
// embedded Gauss-Legendre 12/24 error estimate until the absolute tolerance
// or the subdivision budget is reached.

namespace demon::quad {

struct Options {
  double abs_tol = 1e-10;
  int max_intervals = 10000;
};

using Integrand = std::function<std::complex<double>(double)>;

struct Result {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  int intervals = 0;
};

// Integrates f over [breakpoints.front(), breakpoints.back()] with initial
// panel edges at every breakpoint. Throws QuadratureFailure if the budget is
// exhausted before the tolerance is met.
Result integrate(const Integrand& f, const std::vector<double>& breakpoints,
                 const Options& opts = {});

// Family evaluation: fs[0] drives the adaptation; every other member is then
// evaluated on the identical final panel set. Integrands that differ only by
// slowly varying factors (counting-field phases, one power of omega) inherit
// the driver's resolution, and their differences are free of independent
// quadrature noise.
struct FamilyResult {
  std::vector<std::complex<double>> values;
  double error = 0.0;  // driver error estimate
  int intervals = 0;
};

FamilyResult integrate_family(const std::vector<Integrand>& fs,
                              const std::vector<double>& breakpoints,
                              const Options& opts = {});

// Deduplicated sorted breakpoint list clipped to [lo, hi]; lo and hi are
// always included.
std::vector<double> clip_breakpoints(double lo, double hi,
                                     const std::vector<double>& interior);

}  // namespace demon::quad
