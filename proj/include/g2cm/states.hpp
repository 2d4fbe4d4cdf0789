#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace g2cm {

// Quadrature convention used throughout: x_theta = (a^dag e^{i theta} + a e^{-i theta})/sqrt(2),
// with q = x_0 and p = x_{pi/2}.  The vacuum then has Var(x_theta) = 1/2 for every theta, and a
// covariance matrix is physical iff all of its symplectic eigenvalues are >= 1/2.
inline constexpr double vacuum_variance = 0.5;

// Malformed or out-of-domain input (CLI exit code 2).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation could not meet its accuracy contract (CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Covariance matrices are dense symmetric 2x2 (one mode) or 4x4 (two modes), ordered
// (q1, p1[, q2, p2]).  First moments use the same ordering.
template <typename Scalar>
using CovarianceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using FirstMoments = Eigen::Vector<Scalar, Eigen::Dynamic>;

using CovarianceMatrixd = CovarianceMatrix<double>;
using FirstMomentsd = FirstMoments<double>;

template <typename Scalar>
Scalar normalize_angle(Scalar a) {
  const Scalar two_pi = Scalar(2) * Scalar(M_PI);
  Scalar m = std::fmod(a, two_pi);
  if (m < Scalar(0)) m += two_pi;
  return m;
}

// Squeezing parameter xi = r e^{i psi}; r >= 0 and psi is stored normalized to [0, 2 pi).
template <typename Scalar>
struct SqueezingParam {
  Scalar r{0};
  Scalar psi{0};

  SqueezingParam() = default;
  SqueezingParam(Scalar r_, Scalar psi_) : r(r_), psi(normalize_angle(psi_)) {
    if (!(r_ >= Scalar(0))) throw ValidationError("squeezing amplitude r must be >= 0");
    if (!std::isfinite(psi_)) throw ValidationError("squeezing phase psi must be finite");
  }
};

using SqueezingParamd = SqueezingParam<double>;

// Displaced squeezed thermal state of one mode.
template <typename Scalar>
struct SingleModeState {
  std::complex<Scalar> alpha{0, 0};
  SqueezingParam<Scalar> xi{};
  Scalar n_th{0};

  SingleModeState() = default;
  SingleModeState(std::complex<Scalar> alpha_, SqueezingParam<Scalar> xi_, Scalar n_th_)
      : alpha(alpha_), xi(xi_), n_th(n_th_) {
    if (!(n_th_ >= Scalar(0))) throw ValidationError("thermal occupation n_th must be >= 0");
    if (!std::isfinite(alpha_.real()) || !std::isfinite(alpha_.imag()))
      throw ValidationError("displacement alpha must be finite");
  }
};

using SingleModeStated = SingleModeState<double>;

// Two thermal modes coupled by a two-mode squeezer, each displaced independently.
template <typename Scalar>
struct TwoModeState {
  std::complex<Scalar> alpha{0, 0};
  std::complex<Scalar> beta{0, 0};
  SqueezingParam<Scalar> xi{};
  Scalar n_th1{0};
  Scalar n_th2{0};

  TwoModeState() = default;
  TwoModeState(std::complex<Scalar> alpha_, std::complex<Scalar> beta_, SqueezingParam<Scalar> xi_,
               Scalar n_th1_, Scalar n_th2_)
      : alpha(alpha_), beta(beta_), xi(xi_), n_th1(n_th1_), n_th2(n_th2_) {
    if (!(n_th1_ >= Scalar(0)) || !(n_th2_ >= Scalar(0)))
      throw ValidationError("thermal occupations must be >= 0");
    if (!std::isfinite(alpha_.real()) || !std::isfinite(alpha_.imag()) ||
        !std::isfinite(beta_.real()) || !std::isfinite(beta_.imag()))
      throw ValidationError("displacements must be finite");
  }
};

using TwoModeStated = TwoModeState<double>;

}  // namespace g2cm
