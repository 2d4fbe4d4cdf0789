#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "g2cm/chi_moments.hpp"
#include "g2cm/covariance.hpp"
#include "g2cm/states.hpp"

namespace g2cm {

enum class G2Method { closed_form, moment_pipeline, estimated, oracle };

template <typename Scalar>
struct G2Result {
  Scalar value{0};
  G2Method method{G2Method::moment_pipeline};
  std::optional<Scalar> uncertainty{};  // present iff method == estimated
};

using G2Resultd = G2Result<double>;

template <typename Scalar>
struct ThresholdResult {
  bool exists{false};
  std::optional<Scalar> alpha_th{};
  Scalar denominator{0};  // threshold exists iff this is positive
};

using ThresholdResultd = ThresholdResult<double>;

namespace detail {

// g2 is nonnegative for any quantum state; tiny negative values are rounding noise.
template <typename Scalar>
Scalar guard_g2(Scalar value) {
  if (value < Scalar(-1e-9)) throw NumericalError("g2 evaluated significantly below zero");
  return std::max(value, Scalar(0));
}

}  // namespace detail

/**
 * Zero-delay second-order correlation of one mode from its first two symmetric-ordered
 * moments m1 = <[a^dag a]_s>, m2 = <[(a^dag)^2 a^2]_s>:
 *
 *   g2(0) = 2 (2 m2 - 4 m1 + 1) / (2 m1 - 1)^2
 */
template <typename Scalar>
G2Result<Scalar> g2_single_from_moments(Scalar m1, Scalar m2) {
  const Scalar mean_n = m1 - Scalar(0.5);
  if (mean_n <= Scalar(1e-12))
    throw ValidationError("g2 undefined for zero mean photon number");
  const Scalar value =
      Scalar(2) * (Scalar(2) * m2 - Scalar(4) * m1 + Scalar(1)) / ((Scalar(2) * m1 - Scalar(1)) * (Scalar(2) * m1 - Scalar(1)));
  return {detail::guard_g2(value), G2Method::moment_pipeline, std::nullopt};
}

// Moment pipeline: covariance matrix -> chi coefficients -> m1, m2 -> g2.
template <typename Scalar>
G2Result<Scalar> g2_single_pipeline(const CovarianceMatrix<Scalar>& sigma,
                                    const FirstMoments<Scalar>& x) {
  const auto k = chi_coefficients(sigma, x);
  if (k.modes != 1) throw ValidationError("g2_single_pipeline requires a one-mode covariance matrix");
  const auto m = symmetric_moments_order2(k);
  return g2_single_from_moments(m.m1, m.m2);
}

template <typename Scalar>
G2Result<Scalar> g2_single_pipeline(const SingleModeState<Scalar>& s) {
  const auto [sigma, x] = cm_single(s);
  return g2_single_pipeline<Scalar>(sigma, x);
}

/**
 * Closed form for a displaced squeezed thermal state with real displacement:
 *
 *   g2 = 2 + [ S (S + 4 a^2 cos psi) - 4 a^4 ] / [ C + 2 a^2 - 1 ]^2,
 *
 * S = (1+2n) sinh 2r, C = (1+2n) cosh 2r, a = alpha.  Equals the moment pipeline
 * identically; both are kept as independent routes and compared in the tests.
 */
template <typename Scalar>
G2Result<Scalar> g2_single_closed_form(const SingleModeState<Scalar>& s) {
  if (s.alpha.imag() != Scalar(0))
    throw ValidationError("closed form requires a real displacement; use the moment pipeline");
  const Scalar a2 = s.alpha.real() * s.alpha.real();
  const Scalar c = Scalar(1) + Scalar(2) * s.n_th;
  const Scalar S = c * std::sinh(Scalar(2) * s.xi.r);
  const Scalar C = c * std::cosh(Scalar(2) * s.xi.r);
  const Scalar den = C + Scalar(2) * a2 - Scalar(1);
  if (den <= Scalar(1e-12))
    throw ValidationError("g2 undefined for zero mean photon number");
  const Scalar value =
      Scalar(2) + (S * (S + Scalar(4) * a2 * std::cos(s.xi.psi)) - Scalar(4) * a2 * a2) / (den * den);
  return {detail::guard_g2(value), G2Method::closed_form, std::nullopt};
}

/**
 * Coherent amplitude at which g2(0) of the displaced squeezed thermal state crosses 1.
 * Below the threshold g2 >= 1; above it the state is antibunched.
 *
 *   alpha_th = (1/2) sqrt[ (S^2 + (C-1)^2) / (tau(r, n) - S (1 + cos psi)) ]
 *
 * with tau the nonclassical depth.  The threshold exists iff the denominator is
 * positive, which confines psi to (pi/2, 3 pi/2) and requires tau > 0.
 */
template <typename Scalar>
ThresholdResult<Scalar> alpha_threshold(Scalar r, Scalar psi, Scalar n_th) {
  if (!(r > Scalar(0))) throw ValidationError("threshold undefined without squeezing (r > 0)");
  const Scalar c = Scalar(1) + Scalar(2) * n_th;
  const Scalar S = c * std::sinh(Scalar(2) * r);
  const Scalar C = c * std::cosh(Scalar(2) * r);
  ThresholdResult<Scalar> res;
  res.denominator = nonclassical_depth(r, n_th) - S * (Scalar(1) + std::cos(psi));
  if (res.denominator > Scalar(1e-15)) {
    res.exists = true;
    res.alpha_th = std::sqrt((S * S + (C - Scalar(1)) * (C - Scalar(1))) / res.denominator) / Scalar(2);
  }
  return res;
}

// psi = pi specialization: the denominator reduces exactly to the nonclassical depth,
// so a threshold exists iff the state is nonclassical.
template <typename Scalar>
ThresholdResult<Scalar> alpha_threshold_pi(Scalar r, Scalar n_th) {
  if (!(r > Scalar(0))) throw ValidationError("threshold undefined without squeezing (r > 0)");
  const Scalar c = Scalar(1) + Scalar(2) * n_th;
  const Scalar S = c * std::sinh(Scalar(2) * r);
  const Scalar C = c * std::cosh(Scalar(2) * r);
  ThresholdResult<Scalar> res;
  res.denominator = nonclassical_depth(r, n_th);
  if (res.denominator > Scalar(1e-15)) {
    res.exists = true;
    res.alpha_th = std::sqrt((S * S + (C - Scalar(1)) * (C - Scalar(1))) / res.denominator) / Scalar(2);
  }
  return res;
}

/**
 * Amplitude minimizing g2(0) at psi = pi:
 *
 *   alpha_min = sqrt[ S (S / tau - 1/2) ]
 *
 * Present iff tau > 0 (the inner factor is then automatically positive).  The returned
 * point is verified to be a local minimum by comparing closed-form values on both sides.
 */
template <typename Scalar>
std::optional<Scalar> alpha_min_pi(Scalar r, Scalar n_th) {
  if (!(r > Scalar(0))) throw ValidationError("alpha_min undefined without squeezing (r > 0)");
  const Scalar tau = nonclassical_depth(r, n_th);
  if (!(tau > Scalar(0))) return std::nullopt;
  const Scalar S = (Scalar(1) + Scalar(2) * n_th) * std::sinh(Scalar(2) * r);
  const Scalar radicand = S * (S / tau - Scalar(0.5));
  if (!(radicand > Scalar(0))) return std::nullopt;
  const Scalar a_min = std::sqrt(radicand);

  const auto g2_at = [&](Scalar a) {
    return g2_single_closed_form(SingleModeState<Scalar>({a, Scalar(0)}, {r, Scalar(M_PI)}, n_th)).value;
  };
  const Scalar h = Scalar(1e-5) * std::max(Scalar(1), a_min);
  const Scalar center = g2_at(a_min);
  if (!(g2_at(a_min - h) >= center && g2_at(a_min + h) >= center))
    throw NumericalError("alpha_min is not a local minimum of the closed form");
  return a_min;
}

/**
 * Zero-delay cross-mode correlation of the combined two-mode field:
 *
 *   g2 = [ m2a + m2b - 3 (m1a + m1b - 1/2) + 2 <[n_a]_s [n_b]_s> ] / [ m1a + m1b - 1 ]^2
 */
template <typename Scalar>
G2Result<Scalar> g2_two_mode(const CovarianceMatrix<Scalar>& sigma, const FirstMoments<Scalar>& x) {
  const auto k = chi_coefficients(sigma, x);
  if (k.modes != 2) throw ValidationError("g2_two_mode requires a two-mode covariance matrix");
  const Scalar m1a = m1_sym(k.occ_a, k.mean_a);
  const Scalar m2a = m2_sym(k.occ_a, k.anom_a, k.mean_a);
  const Scalar m1b = m1_sym(k.occ_b, k.mean_b);
  const Scalar m2b = m2_sym(k.occ_b, k.anom_b, k.mean_b);
  const Scalar den = m1a + m1b - Scalar(1);
  if (den <= Scalar(1e-12))
    throw ValidationError("g2 undefined for zero mean photon number");
  const Scalar num =
      m2a + m2b - Scalar(3) * (m1a + m1b - Scalar(0.5)) + Scalar(2) * cross_moment(k);
  return {detail::guard_g2(num / (den * den)), G2Method::moment_pipeline, std::nullopt};
}

template <typename Scalar>
G2Result<Scalar> g2_two_mode(const TwoModeState<Scalar>& s) {
  const auto [sigma, x] = cm_two_mode(s);
  return g2_two_mode<Scalar>(sigma, x);
}

/**
 * Threshold amplitude for the symmetric two-mode configuration (alpha = beta real,
 * n_th1 = n_th2 = n):
 *
 *   alpha_th = (1/2) sqrt[ (S^2 + (C-1)^2) / ( (tau(r,n) + tau(-r,n))/2 - S cos psi ) ]
 *
 * At psi = pi the denominator reduces to tau(r, n), matching the single-mode threshold.
 */
template <typename Scalar>
ThresholdResult<Scalar> alpha_threshold_two_mode_symmetric(Scalar r, Scalar psi, Scalar n_th) {
  if (!(r > Scalar(0))) throw ValidationError("threshold undefined without squeezing (r > 0)");
  const Scalar c = Scalar(1) + Scalar(2) * n_th;
  const Scalar S = c * std::sinh(Scalar(2) * r);
  const Scalar C = c * std::cosh(Scalar(2) * r);
  ThresholdResult<Scalar> res;
  res.denominator = (nonclassical_depth(r, n_th) + nonclassical_depth(-r, n_th)) / Scalar(2) -
                    S * std::cos(psi);
  if (res.denominator > Scalar(1e-15)) {
    res.exists = true;
    res.alpha_th = std::sqrt((S * S + (C - Scalar(1)) * (C - Scalar(1))) / res.denominator) / Scalar(2);
  }
  return res;
}

/**
 * Numeric threshold for asymmetric two-mode configurations: smallest alpha > 0 with
 * g2(alpha, beta = ratio * alpha) = 1, located by bracketing and bisection.  No closed
 * form is attempted; for the symmetric configuration this agrees with
 * alpha_threshold_two_mode_symmetric (checked in the tests).
 */
template <typename Scalar>
std::optional<Scalar> alpha_threshold_two_mode_numeric(Scalar r, Scalar psi, Scalar n_th1,
                                                       Scalar n_th2, Scalar beta_over_alpha = Scalar(1),
                                                       Scalar alpha_max = Scalar(50)) {
  if (!(r > Scalar(0))) throw ValidationError("threshold undefined without squeezing (r > 0)");
  if (!(beta_over_alpha >= Scalar(0))) throw ValidationError("beta/alpha ratio must be >= 0");
  const auto excess = [&](Scalar a) {
    const TwoModeState<Scalar> s({a, Scalar(0)}, {beta_over_alpha * a, Scalar(0)}, {r, psi}, n_th1, n_th2);
    return g2_two_mode(s).value - Scalar(1);
  };
  // March outward on a geometric grid until the sign first flips.
  Scalar lo = Scalar(1e-4);
  Scalar f_lo = excess(lo);
  bool bracketed = false;
  Scalar hi = lo;
  for (Scalar a = Scalar(0.01); a <= alpha_max; a *= Scalar(1.05)) {
    const Scalar f = excess(a);
    if ((f_lo > 0) != (f > 0)) {
      hi = a;
      bracketed = true;
      break;
    }
    lo = a;
    f_lo = f;
  }
  if (!bracketed) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = (lo + hi) / Scalar(2);
    const Scalar f = excess(mid);
    if ((f_lo > 0) == (f > 0)) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / Scalar(2);
}

}  // namespace g2cm
