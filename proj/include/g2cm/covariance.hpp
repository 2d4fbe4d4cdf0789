#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "g2cm/states.hpp"

namespace g2cm {

/**
 * Covariance matrix and first moments of a displaced squeezed thermal state.
 *
 * The phase convention follows the squeeze unitary S(xi) = exp[(xi (a^dag)^2 - xi^* a^2)/2]
 * with xi = r e^{i psi} acting on a thermal state (the fock module builds exactly that
 * unitary, and the two routes are required to agree):
 *
 *   sigma_qq = ((1+2n)/2) [cosh 2r + sinh 2r cos psi]
 *   sigma_pp = ((1+2n)/2) [cosh 2r - sinh 2r cos psi]
 *   sigma_qp = ((1+2n)/2)  sinh 2r sin psi
 *   X = sqrt(2) (Re alpha, Im alpha)
 *
 * psi = pi squeezes q (variance ((1+2n)/2) e^{-2r} at theta = 0), so a real displacement
 * combined with psi = pi has its noise reduced along the displacement direction.
 */
template <typename Scalar>
std::pair<CovarianceMatrix<Scalar>, FirstMoments<Scalar>> cm_single(
    const SingleModeState<Scalar>& s) {
  const Scalar c = (Scalar(1) + Scalar(2) * s.n_th) / Scalar(2);
  const Scalar ch = std::cosh(Scalar(2) * s.xi.r);
  const Scalar sh = std::sinh(Scalar(2) * s.xi.r);
  const Scalar cp = std::cos(s.xi.psi);
  const Scalar sp = std::sin(s.xi.psi);

  CovarianceMatrix<Scalar> sigma(2, 2);
  sigma << c * (ch + sh * cp), c * sh * sp,
           c * sh * sp,        c * (ch - sh * cp);

  FirstMoments<Scalar> x(2);
  const Scalar rt2 = std::sqrt(Scalar(2));
  x << rt2 * s.alpha.real(), rt2 * s.alpha.imag();
  return {std::move(sigma), std::move(x)};
}

/**
 * Covariance matrix and first moments of a displaced two-mode squeezed thermal state,
 * S2(xi) = exp(xi a^dag b^dag - xi^* a b) applied to a product of thermal states.
 *
 * sigma = (1/2) [[a_d I2, c_od R], [c_od R, b_d I2]] with
 *   a_d  = cosh 2r + 2 (n1 cosh^2 r + n2 sinh^2 r)
 *   b_d  = cosh 2r + 2 (n1 sinh^2 r + n2 cosh^2 r)
 *   c_od = (1 + n1 + n2) sinh 2r
 *   R    = [[cos psi, sin psi], [sin psi, -cos psi]]
 *
 * For n1 = n2 = 0 the state is pure and both symplectic eigenvalues equal 1/2.
 */
template <typename Scalar>
std::pair<CovarianceMatrix<Scalar>, FirstMoments<Scalar>> cm_two_mode(
    const TwoModeState<Scalar>& s) {
  const Scalar ch2 = std::cosh(Scalar(2) * s.xi.r);
  const Scalar sh2 = std::sinh(Scalar(2) * s.xi.r);
  const Scalar ch_sq = std::pow(std::cosh(s.xi.r), 2);
  const Scalar sh_sq = std::pow(std::sinh(s.xi.r), 2);
  const Scalar cp = std::cos(s.xi.psi);
  const Scalar sp = std::sin(s.xi.psi);

  const Scalar a_d = ch2 + Scalar(2) * (s.n_th1 * ch_sq + s.n_th2 * sh_sq);
  const Scalar b_d = ch2 + Scalar(2) * (s.n_th1 * sh_sq + s.n_th2 * ch_sq);
  const Scalar c_od = (Scalar(1) + s.n_th1 + s.n_th2) * sh2;

  CovarianceMatrix<Scalar> sigma = CovarianceMatrix<Scalar>::Zero(4, 4);
  sigma(0, 0) = sigma(1, 1) = a_d / Scalar(2);
  sigma(2, 2) = sigma(3, 3) = b_d / Scalar(2);
  Eigen::Matrix<Scalar, 2, 2> r_block;
  r_block << cp, sp, sp, -cp;
  sigma.template block<2, 2>(0, 2) = (c_od / Scalar(2)) * r_block;
  sigma.template block<2, 2>(2, 0) = (c_od / Scalar(2)) * r_block;

  FirstMoments<Scalar> x(4);
  const Scalar rt2 = std::sqrt(Scalar(2));
  x << rt2 * s.alpha.real(), rt2 * s.alpha.imag(), rt2 * s.beta.real(), rt2 * s.beta.imag();
  return {std::move(sigma), std::move(x)};
}

// Purity is unaffected by displacement and squeezing: 1/(1+2 n_th) per thermal mode.
template <typename Scalar>
Scalar purity(const SingleModeState<Scalar>& s) {
  return Scalar(1) / (Scalar(1) + Scalar(2) * s.n_th);
}

template <typename Scalar>
Scalar purity(const TwoModeState<Scalar>& s) {
  return Scalar(1) / ((Scalar(1) + Scalar(2) * s.n_th1) * (Scalar(1) + Scalar(2) * s.n_th2));
}

/**
 * Nonclassical depth tau(r, n_th) = 1 - (1+2 n_th) e^{-2r}.
 *
 * Positive iff the smallest quadrature variance ((1+2n)/2) e^{-2r} lies below the vacuum
 * value 1/2.  The raw (possibly negative) value is returned; negative values mean the
 * squeezing does not overcome the thermal noise.  r may be negative (formally flips the
 * squeezed quadrature), which some two-mode expressions rely on.
 */
template <typename Scalar>
Scalar nonclassical_depth(Scalar r, Scalar n_th) {
  if (!(n_th >= Scalar(0))) throw ValidationError("thermal occupation n_th must be >= 0");
  // expm1/log1p form of 1 - (1+2n)e^{-2r}: accurate near the classicality boundary and
  // exactly zero at r = r_threshold(n_th).
  return -std::expm1(std::log1p(Scalar(2) * n_th) - Scalar(2) * r);
}

// Squeezing amplitude where the nonclassical depth changes sign: r_th = log(1+2 n_th)/2.
template <typename Scalar>
Scalar r_threshold(Scalar n_th) {
  if (!(n_th >= Scalar(0))) throw ValidationError("thermal occupation n_th must be >= 0");
  return std::log1p(Scalar(2) * n_th) / Scalar(2);
}

namespace detail {

template <typename Scalar>
void require_covariance_shape(const CovarianceMatrix<Scalar>& sigma) {
  const auto n = sigma.rows();
  if (sigma.cols() != n || (n != 2 && n != 4))
    throw ValidationError("covariance matrix must be 2x2 or 4x4");
  const Scalar scale = std::max(Scalar(1), sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale)
    throw ValidationError("covariance matrix must be symmetric");
}

}  // namespace detail

/**
 * Symplectic eigenvalues of a 2x2 or 4x4 covariance matrix, ascending.
 *
 * Computed as the absolute imaginary parts of the spectrum of Omega * sigma with
 * Omega = diag_blocks([[0,1],[-1,0]]).  For a physical sigma the spectrum is +-(i nu_k);
 * an indefinite sigma produces real eigenvalues, which map to nu = 0 and are therefore
 * reported as unphysical by check_physical.
 */
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> symplectic_eigenvalues(const CovarianceMatrix<Scalar>& sigma) {
  detail::require_covariance_shape(sigma);
  const auto n = sigma.rows();
  CovarianceMatrix<Scalar> sym = (sigma + sigma.transpose()) / Scalar(2);
  CovarianceMatrix<Scalar> omega = CovarianceMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    omega(k, k + 1) = Scalar(1);
    omega(k + 1, k) = Scalar(-1);
  }
  Eigen::EigenSolver<CovarianceMatrix<Scalar>> es(omega * sym, /*computeEigenvectors=*/false);
  std::vector<Scalar> mags(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()[i].imag());
  std::sort(mags.begin(), mags.end());
  // The spectrum pairs up as (nu, nu); keep one representative per pair.
  Eigen::Vector<Scalar, Eigen::Dynamic> nus(n / 2);
  for (Eigen::Index k = 0; k < n / 2; ++k) nus[k] = mags[static_cast<std::size_t>(2 * k)];
  return nus;
}

template <typename Scalar>
struct PhysicalityReport {
  bool physical{false};
  Eigen::Vector<Scalar, Eigen::Dynamic> symplectic_eigenvalues;
};

// Physical iff every symplectic eigenvalue is >= 1/2 within tol.
template <typename Scalar>
PhysicalityReport<Scalar> check_physical(const CovarianceMatrix<Scalar>& sigma,
                                         Scalar tol = Scalar(1e-9)) {
  PhysicalityReport<Scalar> report;
  report.symplectic_eigenvalues = symplectic_eigenvalues(sigma);
  report.physical = (report.symplectic_eigenvalues.minCoeff() >= Scalar(0.5) - tol);
  return report;
}

}  // namespace g2cm
