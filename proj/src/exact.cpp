#include "demon/exact.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace demon {

namespace {

using cd = std::complex<double>;

constexpr double kBranchThreshold = 1e-14;

}  // namespace

DiscretizedBath discretize_bath(const ReservoirSpec& res, Outcome v,
                                const FeedbackProtocol& fb, int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("discretize_bath: n_modes >= 1");
  const auto [lo, hi] = effective_support(res);
  DiscretizedBath bath;
  bath.label = res.label;
  bath.domega = (hi - lo) / n_modes;
  bath.omega.resize(n_modes);
  bath.coupling.resize(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double w = lo + (k + 0.5) * bath.domega;
    bath.omega(k) = w;
    bath.coupling(k) =
        std::sqrt(spectral_density(w, res, v, fb) * bath.domega / (2.0 * M_PI));
  }
  return bath;
}

ExactSolver::ExactSolver(const SystemConfig& cfg, int modes_per_reservoir)
    : cfg_(cfg), n_modes_(modes_per_reservoir), dim_(1 + 2 * modes_per_reservoir) {
  for (Outcome v : kOutcomes)
    for (Reservoir r : kReservoirs)
      baths_[static_cast<int>(v)][static_cast<int>(r)] =
          discretize_bath(cfg.reservoir(r), v, cfg.feedback, modes_per_reservoir);
}

double ExactSolver::recurrence_horizon() const {
  double coarsest = 0.0;
  for (Reservoir r : kReservoirs)
    coarsest = std::max(coarsest, bath(r, Outcome::Empty).domega);
  return 2.0 * M_PI / coarsest;
}

Eigen::MatrixXcd ExactSolver::thermal_correlation(double n_dot) const {
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(dim_, dim_);
  C(0, 0) = n_dot;
  for (Reservoir r : kReservoirs) {
    const DiscretizedBath& b = bath(r, Outcome::Empty);
    const int off = first_site(r);
    for (int k = 0; k < n_modes_; ++k)
      C(off + k, off + k) = fermi_occupation(b.omega(k), cfg_.reservoir(r));
  }
  return C;
}

Eigen::MatrixXd ExactSolver::hamiltonian(Outcome v) const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
  h(0, 0) = cfg_.dot.epsilon;
  for (Reservoir r : kReservoirs) {
    const DiscretizedBath& b = bath(r, v);
    const int off = first_site(r);
    for (int k = 0; k < n_modes_; ++k) {
      h(off + k, off + k) = b.omega(k);
      h(0, off + k) = b.coupling(k);
      h(off + k, 0) = b.coupling(k);
    }
  }
  return h;
}

Eigen::MatrixXcd ExactSolver::evolve(const Eigen::MatrixXcd& C, Outcome v, double t,
                                     double elapsed) const {
  if (elapsed + t > recurrence_horizon()) {
    std::ostringstream msg;
    msg << "evolution to t = " << elapsed + t
        << " exceeds the recurrence horizon " << recurrence_horizon()
        << " of the discretized bath (increase n_modes)";
    throw HorizonExceeded(msg.str());
  }
  const int vi = static_cast<int>(v);
  if (eigvec_[vi].size() == 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hamiltonian(v));
    eigvec_[vi] = eig.eigenvectors();
    eigval_[vi] = eig.eigenvalues();
  }
  if (cached_tau_[vi] != t) {
    const Eigen::VectorXcd phase =
        (cd(0.0, -t) * eigval_[vi].cast<cd>().array()).exp();
    cached_u_[vi] = eigvec_[vi].cast<cd>() * phase.asDiagonal() *
                    eigvec_[vi].transpose().cast<cd>();
    cached_tau_[vi] = t;
  }
  const Eigen::MatrixXcd& U = cached_u_[vi];
  return U.adjoint() * C * U;
}

// Krylov (Lanczos) propagation  u <- exp(-i h dt) u  for the arrowhead h.
namespace {

struct ArrowheadH {
  double eps;
  const Eigen::VectorXd* omega_L;
  const Eigen::VectorXd* coupling_L;
  const Eigen::VectorXd* omega_R;
  const Eigen::VectorXd* coupling_R;

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    const int nl = static_cast<int>(omega_L->size());
    const int nr = static_cast<int>(omega_R->size());
    y.resize(1 + nl + nr);
    cd dot_acc = eps * x(0);
    for (int k = 0; k < nl; ++k) {
      y(1 + k) = (*omega_L)(k)*x(1 + k) + (*coupling_L)(k)*x(0);
      dot_acc += (*coupling_L)(k)*x(1 + k);
    }
    for (int k = 0; k < nr; ++k) {
      y(1 + nl + k) = (*omega_R)(k)*x(1 + nl + k) + (*coupling_R)(k)*x(0);
      dot_acc += (*coupling_R)(k)*x(1 + nl + k);
    }
    y(0) = dot_acc;
  }

  double spectral_bound() const {
    double m = std::abs(eps) + coupling_L->cwiseAbs().sum() +
               coupling_R->cwiseAbs().sum();
    for (int k = 0; k < omega_L->size(); ++k)
      m = std::max(m, std::abs((*omega_L)(k)) + std::abs((*coupling_L)(k)));
    for (int k = 0; k < omega_R->size(); ++k)
      m = std::max(m, std::abs((*omega_R)(k)) + std::abs((*coupling_R)(k)));
    return m;
  }
};

void krylov_step(const ArrowheadH& h, Eigen::VectorXcd& u, double dt, int m) {
  const double norm0 = u.norm();
  if (norm0 == 0.0) return;
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXcd V(n, m);
  Eigen::VectorXd alpha(m), beta(m);
  V.col(0) = u / norm0;
  Eigen::VectorXcd w(n);
  int built = m;
  for (int j = 0; j < m; ++j) {
    h.apply(V.col(j), w);
    // full reorthogonalization: m is small, the cost is negligible
    for (int i = 0; i <= j; ++i) {
      const cd c = V.col(i).dot(w);
      if (i == j) alpha(j) = c.real();
      w -= c * V.col(i);
    }
    for (int i = 0; i <= j; ++i) w -= V.col(i).dot(w) * V.col(i);
    beta(j) = w.norm();
    if (j + 1 < m) {
      if (beta(j) < 1e-14) {
        built = j + 1;  // happy breakdown: exact invariant subspace
        break;
      }
      V.col(j + 1) = w / beta(j);
    }
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
  for (int j = 0; j < built; ++j) {
    T(j, j) = alpha(j);
    if (j + 1 < built) {
      T(j, j + 1) = beta(j);
      T(j + 1, j) = beta(j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  const Eigen::VectorXcd phase =
      (cd(0.0, -dt) * eig.eigenvalues().cast<cd>().array()).exp();
  Eigen::VectorXcd small = eig.eigenvectors().cast<cd>() * phase.asDiagonal() *
                           eig.eigenvectors().row(0).transpose().cast<cd>();
  u = norm0 * V.leftCols(built) * small;
}

}  // namespace

std::vector<double> ExactSolver::occupation_trace(
    double n_dot, Outcome v, const std::vector<double>& times) const {
  if (times.empty()) return {};
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1])
      throw std::invalid_argument("occupation_trace: times must be sorted");
  if (times.front() < 0.0)
    throw std::invalid_argument("occupation_trace: times must be >= 0");
  if (times.back() > recurrence_horizon()) {
    std::ostringstream msg;
    msg << "trace horizon " << times.back() << " exceeds recurrence time "
        << recurrence_horizon();
    throw HorizonExceeded(msg.str());
  }

  const DiscretizedBath& bl = bath(Reservoir::L, v);
  const DiscretizedBath& br = bath(Reservoir::R, v);
  const ArrowheadH h{cfg_.dot.epsilon, &bl.omega, &bl.coupling, &br.omega,
                     &br.coupling};

  Eigen::VectorXd c0(dim_);
  c0(0) = n_dot;
  for (int k = 0; k < n_modes_; ++k) {
    c0(1 + k) = fermi_occupation(bl.omega(k), cfg_.left);
    c0(1 + n_modes_ + k) = fermi_occupation(br.omega(k), cfg_.right);
  }

  const double rho = h.spectral_bound();
  const int krylov_m = 36;
  const double dt_max = 8.0 / std::max(rho, 1e-12);

  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(dim_);
  u(0) = 1.0;  // e^{-i h t} applied to the dot column
  double t_now = 0.0;
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    double remaining = t - t_now;
    while (remaining > 1e-15) {
      const double dt = std::min(remaining, dt_max);
      krylov_step(h, u, dt, krylov_m);
      remaining -= dt;
    }
    t_now = t;
    double nd = 0.0;
    for (int i = 0; i < dim_; ++i) nd += c0(i) * std::norm(u(i));
    out.push_back(nd);
  }
  return out;
}

ExactSolver::MeasurementUpdate ExactSolver::measure_dot(const Eigen::MatrixXcd& C) {
  MeasurementUpdate out;
  const double nd = std::clamp(C(0, 0).real(), 0.0, 1.0);
  out.p_filled = nd;
  out.p_empty = 1.0 - nd;

  const Eigen::VectorXcd col = C.col(0);

  // Conditional-Gaussian update: C^F = C - col row / nd, C^E = C + col row /
  // (1 - nd) on the bath block, dot coherences zeroed, dot entry set to the
  // outcome. The p-weighted sum of the branch bath blocks reproduces C.
  if (out.p_filled >= kBranchThreshold) {
    out.filled = C - (col * col.adjoint()) / cd(nd);
    out.filled.row(0).setZero();
    out.filled.col(0).setZero();
    out.filled(0, 0) = 1.0;
  }
  if (out.p_empty >= kBranchThreshold) {
    out.empty = C + (col * col.adjoint()) / cd(1.0 - nd);
    out.empty.row(0).setZero();
    out.empty.col(0).setZero();
    out.empty(0, 0) = 0.0;
  }
  return out;
}

double ExactSolver::reservoir_occupation(const Eigen::MatrixXcd& C,
                                         Reservoir r) const {
  const int off = first_site(r);
  double acc = 0.0;
  for (int k = 0; k < n_modes_; ++k) acc += C(off + k, off + k).real();
  return acc;
}

double ExactSolver::reservoir_energy(const Eigen::MatrixXcd& C, Reservoir r) const {
  const DiscretizedBath& b = bath(r, Outcome::Empty);  // grid is outcome-free
  const int off = first_site(r);
  double acc = 0.0;
  for (int k = 0; k < n_modes_; ++k)
    acc += b.omega(k) * C(off + k, off + k).real();
  return acc;
}

double ExactSolver::coupling_energy(const Eigen::MatrixXcd& C, Outcome v) const {
  double acc = 0.0;
  for (Reservoir r : kReservoirs) {
    const DiscretizedBath& b = bath(r, v);
    const int off = first_site(r);
    for (int k = 0; k < n_modes_; ++k)
      acc += b.coupling(k) * 2.0 * C(0, off + k).real();
  }
  return acc;
}

double ExactSolver::total_energy(const Eigen::MatrixXcd& C, Outcome v) const {
  return cfg_.dot.epsilon * C(0, 0).real() +
         reservoir_energy(C, Reservoir::L) + reservoir_energy(C, Reservoir::R) +
         coupling_energy(C, v);
}

double ExactSolver::total_number(const Eigen::MatrixXcd& C) const {
  return C.diagonal().real().sum();
}

namespace {

struct FeedbackWalker {
  const ExactSolver& solver;
  const SystemConfig& cfg;
  int periods;
  ExactFeedbackResult* result;

  void segment(const Eigen::MatrixXcd& C_post, Outcome v, int period,
               double weight) {
    const double tau = cfg.feedback.tau;
    const double elapsed = (period - 1) * tau;
    const double n_before = solver.total_number(C_post);
    const double e_before = solver.total_energy(C_post, v);

    const Eigen::MatrixXcd C_end = solver.evolve(C_post, v, tau, elapsed);

    result->max_number_drift =
        std::max(result->max_number_drift,
                 std::abs(solver.total_number(C_end) - n_before));
    result->max_energy_drift =
        std::max(result->max_energy_drift,
                 std::abs(solver.total_energy(C_end, v) - e_before));

    PeriodStats& st = result->period[period - 1];
    const double dn_L =
        solver.reservoir_occupation(C_end, Reservoir::L) -
        solver.reservoir_occupation(C_post, Reservoir::L);
    const double dn_R =
        solver.reservoir_occupation(C_end, Reservoir::R) -
        solver.reservoir_occupation(C_post, Reservoir::R);
    const double dE_res =
        (solver.reservoir_energy(C_end, Reservoir::L) +
         solver.reservoir_energy(C_end, Reservoir::R)) -
        (solver.reservoir_energy(C_post, Reservoir::L) +
         solver.reservoir_energy(C_post, Reservoir::R));
    const double dE_dot = cfg.dot.epsilon * (solver.dot_occupation(C_end) -
                                             solver.dot_occupation(C_post));
    const double e_meas = -solver.coupling_energy(C_end, v);

    st.weight += weight;
    st.dn_L += weight * dn_L;
    st.dn_R += weight * dn_R;
    st.dE_res += weight * dE_res;
    st.dE_dot += weight * dE_dot;
    st.dE_meas += weight * e_meas;

    result->max_energy_identity_error =
        std::max(result->max_energy_identity_error,
                 std::abs(e_meas - (dE_dot + dE_res)));

    if (period == periods) return;
    const auto m = ExactSolver::measure_dot(C_end);
    if (m.has_empty()) segment(m.empty, Outcome::Empty, period + 1, weight * m.p_empty);
    if (m.has_filled())
      segment(m.filled, Outcome::Filled, period + 1, weight * m.p_filled);
  }
};

}  // namespace

ExactFeedbackResult run_exact_feedback(const SystemConfig& cfg,
                                       int modes_per_reservoir, int periods,
                                       double n_dot0, bool exhaustive, int samples,
                                       std::uint64_t seed) {
  if (periods < 1) throw std::invalid_argument("run_exact_feedback: periods >= 1");
  // 2^periods leaves; beyond 12 measurements use outcome sampling instead
  if (exhaustive && periods > 12)
    throw std::invalid_argument(
        "run_exact_feedback: exhaustive branching supports at most 12 periods; "
        "use sampled mode");
  const ExactSolver solver(cfg, modes_per_reservoir);
  if (periods * cfg.feedback.tau > solver.recurrence_horizon())
    throw HorizonExceeded("feedback run exceeds the bath recurrence horizon");

  ExactFeedbackResult result;
  result.period.resize(periods);

  if (exhaustive) {
    FeedbackWalker walker{solver, cfg, periods, &result};
    const auto m0 = ExactSolver::measure_dot(solver.thermal_correlation(n_dot0));
    if (m0.has_empty()) walker.segment(m0.empty, Outcome::Empty, 1, m0.p_empty);
    if (m0.has_filled()) walker.segment(m0.filled, Outcome::Filled, 1, m0.p_filled);
    return result;
  }

  if (samples < 1)
    throw std::invalid_argument("run_exact_feedback: sampled mode needs samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w = 1.0 / samples;
  const auto sample_branch = [&rng, &unit](const ExactSolver::MeasurementUpdate& m,
                                           Outcome& v, Eigen::MatrixXcd& C) {
    const bool pick_filled =
        m.has_filled() && (!m.has_empty() || unit(rng) < m.p_filled);
    v = pick_filled ? Outcome::Filled : Outcome::Empty;
    C = pick_filled ? m.filled : m.empty;
  };
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXcd C;
    Outcome v = Outcome::Empty;
    {
      const Eigen::MatrixXcd C0 = solver.thermal_correlation(n_dot0);
      sample_branch(ExactSolver::measure_dot(C0), v, C);
    }
    for (int period = 1; period <= periods; ++period) {
      const double tau = cfg.feedback.tau;
      const Eigen::MatrixXcd C_end = solver.evolve(C, v, tau, (period - 1) * tau);
      PeriodStats& st = result.period[period - 1];
      st.weight += w;
      st.dn_L += w * (solver.reservoir_occupation(C_end, Reservoir::L) -
                      solver.reservoir_occupation(C, Reservoir::L));
      st.dn_R += w * (solver.reservoir_occupation(C_end, Reservoir::R) -
                      solver.reservoir_occupation(C, Reservoir::R));
      st.dE_meas += w * (-solver.coupling_energy(C_end, v));
      if (period == periods) break;
      sample_branch(ExactSolver::measure_dot(C_end), v, C);
    }
  }
  return result;
}

}  // namespace demon
