#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "g2cm/covariance.hpp"
#include "g2cm/states.hpp"

namespace g2cm {

/**
 * Second-order correlators of the mode operators, read off a covariance matrix and first
 * moments.  These are the coefficients that appear when the Gaussian characteristic
 * function chi(L) = exp(-L^T sigma L / 2 + i L^T X) is differentiated at the origin:
 *
 *   occ_a    = <{da, da^dag}>/2 = (sigma_qq + sigma_pp)/2        (symmetrized occupation)
 *   anom_a   = <da da>          = (sigma_qq - sigma_pp)/2 + i sigma_qp
 *   mean_a   = <a>              = (X_q + i X_p)/sqrt(2)
 *   cross_dd = <da db>,  cross_xd = <da db^dag>                   (two-mode only)
 *
 * da = a - <a>.  The conjugate partners (<da^dag da^dag> etc.) are not stored; they are
 * the complex conjugates of the fields above.
 */
template <typename Scalar>
struct ChiCoefficients {
  int modes{1};
  Scalar occ_a{0};
  Scalar occ_b{0};
  std::complex<Scalar> anom_a{0};
  std::complex<Scalar> anom_b{0};
  std::complex<Scalar> cross_dd{0};
  std::complex<Scalar> cross_xd{0};
  std::complex<Scalar> mean_a{0};
  std::complex<Scalar> mean_b{0};
};

template <typename Scalar>
ChiCoefficients<Scalar> chi_coefficients(const CovarianceMatrix<Scalar>& sigma,
                                         const FirstMoments<Scalar>& x) {
  detail::require_covariance_shape(sigma);
  if (x.size() != sigma.rows())
    throw ValidationError("first-moment vector length must match covariance dimension");

  using C = std::complex<Scalar>;
  const Scalar rt2 = std::sqrt(Scalar(2));
  ChiCoefficients<Scalar> k;
  k.modes = static_cast<int>(sigma.rows() / 2);
  k.occ_a = (sigma(0, 0) + sigma(1, 1)) / Scalar(2);
  k.anom_a = C((sigma(0, 0) - sigma(1, 1)) / Scalar(2), sigma(0, 1));
  k.mean_a = C(x[0], x[1]) / rt2;
  if (k.modes == 2) {
    k.occ_b = (sigma(2, 2) + sigma(3, 3)) / Scalar(2);
    k.anom_b = C((sigma(2, 2) - sigma(3, 3)) / Scalar(2), sigma(2, 3));
    k.mean_b = C(x[2], x[3]) / rt2;
    // <da db> and <da db^dag> from the off-diagonal block (e f; g h) in (q1,p1)x(q2,p2).
    const Scalar e = sigma(0, 2), f = sigma(0, 3), g = sigma(1, 2), h = sigma(1, 3);
    k.cross_dd = C((e - h) / Scalar(2), (f + g) / Scalar(2));
    k.cross_xd = C((e + h) / Scalar(2), (g - f) / Scalar(2));
  }
  return k;
}

// <[a^dag a]_s> = occ + |<a>|^2.
template <typename Scalar>
Scalar m1_sym(Scalar occ, std::complex<Scalar> mean) {
  return occ + std::norm(mean);
}

// <[(a^dag)^2 a^2]_s> = 2 occ^2 + 4 occ |<a>|^2 + |<da da> + <a>^2|^2 (Wick pairing of |a|^4).
template <typename Scalar>
Scalar m2_sym(Scalar occ, std::complex<Scalar> anom, std::complex<Scalar> mean) {
  return Scalar(2) * occ * occ + Scalar(4) * occ * std::norm(mean) +
         std::norm(anom + mean * mean);
}

template <typename Scalar>
struct SingleModeSymMoments {
  Scalar m1{0};
  Scalar m2{0};
};

// First two symmetric-ordered moments of one mode from its chi coefficients.
template <typename Scalar>
SingleModeSymMoments<Scalar> symmetric_moments_order2(const ChiCoefficients<Scalar>& k) {
  return {m1_sym(k.occ_a, k.mean_a), m2_sym(k.occ_a, k.anom_a, k.mean_a)};
}

/**
 * <[a^dag a]_s [b^dag b]_s>: Wick pairing of |a|^2 |b|^2 over the joint Gaussian.
 * Real by construction (every complex term enters with its conjugate).
 */
template <typename Scalar>
Scalar cross_moment(const ChiCoefficients<Scalar>& k) {
  if (k.modes != 2) throw ValidationError("cross_moment requires two-mode coefficients");
  const Scalar na2 = std::norm(k.mean_a);
  const Scalar nb2 = std::norm(k.mean_b);
  return k.occ_a * k.occ_b + std::norm(k.cross_dd) + std::norm(k.cross_xd) +
         k.occ_a * nb2 + k.occ_b * na2 + na2 * nb2 +
         Scalar(2) * std::real(k.cross_dd * std::conj(k.mean_a) * std::conj(k.mean_b)) +
         Scalar(2) * std::real(k.cross_xd * std::conj(k.mean_a) * k.mean_b);
}

namespace detail {

// E[z_{idx[0]} ... z_{idx[n-1]}] for a Gaussian vector with mean mu and covariance sigma:
// peel one factor, E[z_i . rest] = mu_i E[rest] + sum_j sigma(i, idx_j) E[rest \ idx_j].
// idx is restored before returning.  Intended for degree <= 8; cost grows factorially.
template <typename Scalar>
Scalar gaussian_monomial_moment(const CovarianceMatrix<Scalar>& sigma,
                                const FirstMoments<Scalar>& mu, std::vector<int>& idx) {
  if (idx.empty()) return Scalar(1);
  const int i = idx.back();
  idx.pop_back();
  Scalar acc = mu[i] * gaussian_monomial_moment(sigma, mu, idx);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const int partner = idx[j];
    idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(j));
    acc += sigma(i, partner) * gaussian_monomial_moment(sigma, mu, idx);
    idx.insert(idx.begin() + static_cast<std::ptrdiff_t>(j), partner);
  }
  idx.push_back(i);
  return acc;
}

inline double binomial(int n, int k) {
  double v = 1;
  for (int j = 1; j <= k; ++j) v = v * (n - k + j) / j;
  return v;
}

}  // namespace detail

/**
 * Symmetric-ordered moment <prod_i [(a_i^dag)^{n_i} a_i^{n_i}]_s> evaluated as the moment
 * of the Wigner-distribution Gaussian: E[prod_i ((q_i^2 + p_i^2)/2)^{n_i}] expanded into
 * monomials and summed over Isserlis pairings with mean insertions.
 *
 * Independent of the chi-coefficient closed forms above; the two routes are cross-checked
 * in the tests.  Total order sum(2 n_i) is limited to 8.
 */
template <typename Scalar>
Scalar gaussian_symmetric_moment(const CovarianceMatrix<Scalar>& sigma,
                                 const FirstMoments<Scalar>& x, const std::vector<int>& orders) {
  detail::require_covariance_shape(sigma);
  if (x.size() != sigma.rows())
    throw ValidationError("first-moment vector length must match covariance dimension");
  if (static_cast<Eigen::Index>(orders.size()) != sigma.rows() / 2)
    throw ValidationError("one order per mode required");
  int total = 0;
  for (int n : orders) {
    if (n < 0) throw ValidationError("moment orders must be >= 0");
    total += n;
  }
  if (2 * total > 8) throw ValidationError("total moment order limited to 8");
  if (!check_physical(sigma).physical)
    throw ValidationError("covariance matrix is unphysical (symplectic eigenvalue < 1/2)");

  const int modes = static_cast<int>(orders.size());
  // Expand prod_i ((q_i^2 + p_i^2)/2)^{n_i} = 2^{-sum n} prod_i sum_j C(n_i,j) q^{2j} p^{2(n_i-j)}.
  std::vector<int> split(static_cast<std::size_t>(modes), 0);
  Scalar acc(0);
  while (true) {
    double coef = 1;
    std::vector<int> idx;
    for (int m = 0; m < modes; ++m) {
      const int j = split[static_cast<std::size_t>(m)];
      coef *= detail::binomial(orders[static_cast<std::size_t>(m)], j);
      idx.insert(idx.end(), static_cast<std::size_t>(2 * j), 2 * m);
      idx.insert(idx.end(), static_cast<std::size_t>(2 * (orders[static_cast<std::size_t>(m)] - j)),
                 2 * m + 1);
    }
    acc += Scalar(coef) * detail::gaussian_monomial_moment(sigma, x, idx);
    int m = 0;
    while (m < modes && split[static_cast<std::size_t>(m)] == orders[static_cast<std::size_t>(m)]) {
      split[static_cast<std::size_t>(m)] = 0;
      ++m;
    }
    if (m == modes) break;
    ++split[static_cast<std::size_t>(m)];
  }
  return acc / Scalar(std::pow(2.0, total));
}

template <typename Scalar>
Scalar gaussian_symmetric_moment(const CovarianceMatrix<Scalar>& sigma,
                                 const FirstMoments<Scalar>& x, int n) {
  return gaussian_symmetric_moment(sigma, x, std::vector<int>{n});
}

template <typename Scalar>
Scalar gaussian_symmetric_moment(const CovarianceMatrix<Scalar>& sigma,
                                 const FirstMoments<Scalar>& x, int n, int m) {
  return gaussian_symmetric_moment(sigma, x, std::vector<int>{n, m});
}

/**
 * Table of symmetric-ordered moments keyed by per-mode order (n, m), m = 0 for one mode:
 * values[(n, m)] = <[(a^dag)^n a^n]_s [(b^dag)^m b^m]_s>, filled for n + m <= max_total.
 */
template <typename Scalar>
struct SymmetricMoments {
  int modes{1};
  std::map<std::pair<int, int>, Scalar> values;
};

template <typename Scalar>
SymmetricMoments<Scalar> symmetric_moments(const CovarianceMatrix<Scalar>& sigma,
                                           const FirstMoments<Scalar>& x, int max_total = 4) {
  if (max_total < 0 || max_total > 4)
    throw ValidationError("symmetric_moments supports totals up to 4");
  SymmetricMoments<Scalar> sm;
  sm.modes = static_cast<int>(sigma.rows() / 2);
  for (int n = 0; n <= max_total; ++n) {
    if (sm.modes == 1) {
      sm.values[{n, 0}] = gaussian_symmetric_moment(sigma, x, n);
    } else {
      for (int m = 0; n + m <= max_total; ++m)
        sm.values[{n, m}] = gaussian_symmetric_moment(sigma, x, n, m);
    }
  }
  return sm;
}

/**
 * Moments of the photon-number operator from symmetric-ordered moments.
 *
 * Uses the inverse of the ordering expansion [(a^dag)^n a^n]_s =
 * sum_k C(n,k)^2 k! 2^{-k} (a^dag)^{n-k} a^{n-k}:
 *
 *   N   = M1 - 1/2
 *   N^2 = M2 - M1
 *   N^3 = M3 - (3/2) M2 - (1/2) M1 + 1/4
 *   N^4 = M4 - 2 M3 - 2 M2 + 2 M1
 *
 * (M_n = <[(a^dag)^n a^n]_s>).  The expansions are pinned in the tests against exact
 * thermal, coherent and Fock-space photon statistics.  Products N_1^n N_2^m follow by
 * expanding each factor and pairing the cross moments.
 */
template <typename Scalar>
struct NumberMoments {
  int modes{1};
  std::map<std::pair<int, int>, Scalar> values;  // values[(n, m)] = <N_1^n N_2^m>
};

namespace detail {

// number_power_coeffs[k][j]: coefficient of M_j in N^k, j = 0..4 (M_0 = 1).
inline constexpr double number_power_coeffs[5][5] = {
    {1, 0, 0, 0, 0},
    {-0.5, 1, 0, 0, 0},
    {0, -1, 1, 0, 0},
    {0.25, -0.5, -1.5, 1, 0},
    {0, 2, -2, -2, 1},
};

}  // namespace detail

template <typename Scalar>
NumberMoments<Scalar> number_powers_from_symmetric(const SymmetricMoments<Scalar>& sm) {
  NumberMoments<Scalar> nm;
  nm.modes = sm.modes;
  auto sym = [&sm](int n, int m) -> Scalar {
    const auto it = sm.values.find({n, m});
    if (it == sm.values.end())
      throw ValidationError("symmetric moment table is missing a required order");
    return it->second;
  };
  int max_total = 0;
  for (const auto& [key, unused] : sm.values) max_total = std::max(max_total, key.first + key.second);
  for (int n = 0; n <= max_total; ++n) {
    const int m_top = (nm.modes == 2) ? max_total - n : 0;
    for (int m = 0; m <= m_top; ++m) {
      if (n == 0 && m == 0) continue;
      Scalar acc(0);
      for (int j = 0; j <= n; ++j) {
        const double cj = detail::number_power_coeffs[n][j];
        if (cj == 0) continue;
        for (int l = 0; l <= m; ++l) {
          const double cl = detail::number_power_coeffs[m][l];
          if (cl == 0) continue;
          acc += Scalar(cj * cl) * sym(j, l);
        }
      }
      nm.values[{n, m}] = acc;
    }
  }
  return nm;
}

}  // namespace g2cm
