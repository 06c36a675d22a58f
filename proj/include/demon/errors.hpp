#pragma once

#include <stdexcept>
#include <string>

namespace demon {

// Numerical failure taxonomy. These are recoverable per-grid-point conditions:
// the sweep layer records them in the status column and keeps going, while
// library callers may treat them as hard errors.

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stationary 2x2 map has its second eigenvalue too close to 1 (bistable /
// Zeno regime); the fixed point is ill-conditioned and we refuse to return it.
struct DegenerateFixedPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-difference and analytic moment paths disagree beyond tolerance.
struct MomentToleranceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// |dn_L + dn_R| in the stroboscopic stationary state exceeds threshold.
struct ConservationViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A measurement branch produced dS + dS_e < -1e-9; numerics bug by construction.
struct SecondLawViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An omega-weighted spectral integral needs a finite support cutoff.
struct CutoffRequired : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested evolution time exceeds the Poincare recurrence horizon of the
// discretized bath.
struct HorizonExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Measurement branch probability below 1e-14; the conditional state is
// numerically meaningless.
struct DegenerateBranch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace demon
