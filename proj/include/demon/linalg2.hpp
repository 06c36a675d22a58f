#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

// Closed-form 2x2 complex matrix exponential and its directional (Frechet)
// derivative. Both saturate gracefully for strongly damped generators
// (|A| ~ 10^3) where naive cosh/sinh would overflow.

namespace demon {

// exp(A) for 2x2 complex A. Write A = m*I + B with tr B = 0 and B^2 = s^2 I:
// exp(A) = e^m [cosh(s) I + sinhc(s) B]. Evaluated as (e^{m+s} +- e^{m-s})/2
// so that large negative m never meets a large cosh. The degenerate branch
// (eigenvalue gap 2|s| below threshold, including exactly defective A) uses
// the series of sinhc.
inline Eigen::Matrix2cd expm2(const Eigen::Matrix2cd& A) {
  using cd = std::complex<double>;
  const cd m = 0.5 * (A(0, 0) + A(1, 1));
  Eigen::Matrix2cd B = A;
  B(0, 0) -= m;
  B(1, 1) -= m;
  const cd s2 = B(0, 0) * B(0, 0) + B(0, 1) * B(1, 0);
  const cd s = std::sqrt(s2);

  cd cosh_term, sinhc_term;  // e^m cosh(s), e^m sinh(s)/s
  if (std::abs(s) < 1e-6) {
    const cd em = std::exp(m);
    cosh_term = em * (1.0 + s2 / 2.0 + s2 * s2 / 24.0);
    sinhc_term = em * (1.0 + s2 / 6.0 + s2 * s2 / 120.0);
  } else {
    const cd ep = std::exp(m + s);
    const cd en = std::exp(m - s);
    cosh_term = 0.5 * (ep + en);
    sinhc_term = 0.5 * (ep - en) / s;
  }
  Eigen::Matrix2cd out = sinhc_term * B;
  out(0, 0) += cosh_term;
  out(1, 1) += cosh_term;
  return out;
}

// (exp(A), d exp(A)[E]) via scaled Taylor series and repeated squaring:
// with X = exp(A/2^k), D = Frechet derivative at A/2^k in direction E/2^k,
// squaring lifts (X, D) -> (X^2, XD + DX).
inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> expm2_frechet(
    const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& E) {
  const double norm = A.cwiseAbs().maxCoeff();
  int k = 0;
  double scale = 1.0;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++k;
  }
  const Eigen::Matrix2cd As = scale * A;
  const Eigen::Matrix2cd Es = scale * E;

  // Taylor: T_j = As^j/j!, S_j = d(T_j); T_j = T_{j-1} As / j,
  // S_j = (S_{j-1} As + T_{j-1} Es) / j.
  Eigen::Matrix2cd X = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd T = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd S = Eigen::Matrix2cd::Zero();
  for (int j = 1; j <= 24; ++j) {
    S = (S * As + T * Es) / static_cast<double>(j);
    T = (T * As) / static_cast<double>(j);
    X += T;
    D += S;
  }
  for (int j = 0; j < k; ++j) {
    D = X * D + D * X;
    X = X * X;
  }
  return {X, D};
}

}  // namespace demon
