#include "g2cm/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace g2cm::fock {

namespace {

using Complex = std::complex<double>;

void require_dim(int dim, int min_dim = 2) {
  if (dim < min_dim) throw ValidationError("Fock-space dimension too small");
}

// Thermal occupation probabilities p_n = n_th^n / (1 + n_th)^{n+1}, n < dim.
Eigen::VectorXd thermal_probs(double n_th, int dim) {
  Eigen::VectorXd p(dim);
  const double ratio = n_th / (1.0 + n_th);
  p[0] = 1.0 / (1.0 + n_th);
  for (int n = 1; n < dim; ++n) p[n] = p[n - 1] * ratio;
  return p;
}

// rho = (U sqrt(diag(p))) (U sqrt(diag(p)))^dag, Hermitian PSD by construction.
CMatrix conjugate_thermal(const CMatrix& u, const Eigen::VectorXd& p) {
  CMatrix w = u * p.cwiseSqrt().asDiagonal();
  const auto n = w.rows();
  CMatrix rho = CMatrix::Zero(n, n);
  rho.selfadjointView<Eigen::Lower>().rankUpdate(w);
  rho.triangularView<Eigen::StrictlyUpper>() = rho.adjoint();
  return rho;
}

// Trace deficit plus the population parked in the top two Fock levels of each mode.
// Anti-Hermitian generators exponentiate to exactly unitary matrices even after
// truncation, so a clipped pure state keeps trace 1; mass accumulating at the edge of
// the box is what betrays an undersized basis.
double truncation_tail(const CMatrix& rho, const std::vector<int>& mode_dims) {
  const double deficit = std::max(0.0, 1.0 - rho.trace().real());
  double edge = 0;
  if (mode_dims.size() == 1) {
    const int d = mode_dims[0];
    for (int n = std::max(0, d - 2); n < d; ++n) edge += rho(n, n).real();
  } else {
    const int d = mode_dims[1];
    for (int n1 = 0; n1 < mode_dims[0]; ++n1)
      for (int n2 = 0; n2 < d; ++n2)
        if (n1 >= mode_dims[0] - 2 || n2 >= d - 2) {
          const int idx = n1 * d + n2;
          edge += rho(idx, idx).real();
        }
  }
  return std::max(deficit, std::max(0.0, edge));
}

int joint_dim(const TruncatedState& ts) {
  int d = 1;
  for (int m : ts.mode_dims) d *= m;
  return d;
}

void require_state(const TruncatedState& ts) {
  const int d = joint_dim(ts);
  if (ts.mode_dims.empty() || ts.mode_dims.size() > 2 || ts.rho.rows() != d || ts.rho.cols() != d)
    throw ValidationError("malformed truncated state");
}

}  // namespace

CMatrix annihilation(int dim) {
  require_dim(dim);
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

CMatrix displacement_matrix(Complex alpha, int dim) {
  require_dim(dim);
  const CMatrix a = annihilation(dim);
  CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp();
}

CMatrix squeeze_matrix(double r, double psi, int dim) {
  require_dim(dim);
  if (!(r >= 0)) throw ValidationError("squeezing amplitude r must be >= 0");
  const Complex xi = std::polar(r, psi);
  const CMatrix a = annihilation(dim);
  const CMatrix adag_sq = a.adjoint() * a.adjoint();
  CMatrix gen = 0.5 * (xi * adag_sq - std::conj(xi) * adag_sq.adjoint());
  return gen.exp();
}

CMatrix two_mode_squeeze_matrix(double r, double psi, int dim_per_mode) {
  require_dim(dim_per_mode);
  if (!(r >= 0)) throw ValidationError("squeezing amplitude r must be >= 0");
  const int d = dim_per_mode;
  const Complex xi = std::polar(r, psi);
  CMatrix s2 = CMatrix::Zero(d * d, d * d);
  // The generator couples |n1, n2> only to |n1 +- 1, n2 +- 1>, so it is block diagonal
  // over diff = n1 - n2.  Within a block, basis |k + diff, k>, the generator is
  // tridiagonal with zero diagonal; it is symmetric under swapping the modes, so blocks
  // for +-diff coincide.
  for (int diff = 0; diff < d; ++diff) {
    const int nb = d - diff;  // block size
    CMatrix gen = CMatrix::Zero(nb, nb);
    for (int k = 0; k + 1 < nb; ++k) {
      const double c = std::sqrt(double((k + diff + 1) * (k + 1)));
      gen(k + 1, k) = xi * c;
      gen(k, k + 1) = -std::conj(xi) * c;
    }
    const CMatrix block = gen.exp();
    for (int kr = 0; kr < nb; ++kr) {
      for (int kc = 0; kc < nb; ++kc) {
        s2((kr + diff) * d + kr, (kc + diff) * d + kc) = block(kr, kc);
        if (diff > 0) s2(kr * d + (kr + diff), kc * d + (kc + diff)) = block(kr, kc);
      }
    }
  }
  return s2;
}

TruncatedState build_single(const SingleModeStated& s, int dim, double tail_tol) {
  require_dim(dim);
  CMatrix u = squeeze_matrix(s.xi.r, s.xi.psi, dim);
  if (s.alpha != Complex(0, 0)) u = displacement_matrix(s.alpha, dim) * u;
  TruncatedState ts;
  ts.mode_dims = {dim};
  ts.rho = conjugate_thermal(u, thermal_probs(s.n_th, dim));
  ts.tail_mass = truncation_tail(ts.rho, ts.mode_dims);
  ts.tail_ok = ts.tail_mass <= tail_tol;
  return ts;
}

TruncatedState build_two_mode(const TwoModeStated& s, int dim_per_mode, double tail_tol) {
  require_dim(dim_per_mode);
  const int d = dim_per_mode;
  CMatrix u = two_mode_squeeze_matrix(s.xi.r, s.xi.psi, d);
  if (s.alpha != Complex(0, 0) || s.beta != Complex(0, 0)) {
    // Apply D(alpha) x D(beta) column by column: with the flattened index n1 * d + n2 a
    // column reshapes (column-major) to M(n2, n1), and (Da x Db) v = Db M Da^T.
    const CMatrix da_t = displacement_matrix(s.alpha, d).transpose();
    const CMatrix db = displacement_matrix(s.beta, d);
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      Eigen::Map<CMatrix> m(u.col(c).data(), d, d);
      m = db * m * da_t;
    }
  }

  Eigen::VectorXd p(d * d);
  const Eigen::VectorXd p1 = thermal_probs(s.n_th1, d);
  const Eigen::VectorXd p2 = thermal_probs(s.n_th2, d);
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2) p[n1 * d + n2] = p1[n1] * p2[n2];

  TruncatedState ts;
  ts.mode_dims = {d, d};
  ts.rho = conjugate_thermal(u, p);
  ts.tail_mass = truncation_tail(ts.rho, ts.mode_dims);
  ts.tail_ok = ts.tail_mass <= tail_tol;
  return ts;
}

TruncatedState build_single_auto(const SingleModeStated& s, int dim, int dim_cap) {
  for (int d = dim;; d = std::min(2 * d, dim_cap)) {
    TruncatedState ts = build_single(s, d, 1e-10);
    if (ts.tail_ok) return ts;
    if (d >= dim_cap)
      throw NumericalError("tail mass above 1e-10 at the dimension cap (" +
                           std::to_string(dim_cap) + "); refusing to continue");
  }
}

TruncatedState build_two_mode_auto(const TwoModeStated& s, int dim_per_mode, int dim_cap) {
  for (int d = dim_per_mode;; d = std::min(2 * d, dim_cap)) {
    TruncatedState ts = build_two_mode(s, d, 1e-10);
    if (ts.tail_ok) return ts;
    if (d >= dim_cap)
      throw NumericalError("tail mass above 1e-10 at the per-mode dimension cap (" +
                           std::to_string(dim_cap) + "); refusing to continue");
  }
}

Eigen::VectorXd number_distribution(const TruncatedState& ts) {
  require_state(ts);
  Eigen::VectorXd p = ts.rho.diagonal().real();
  const double tr = p.sum();
  if (!(tr > 0)) throw NumericalError("truncated state has vanished trace");
  return p / tr;
}

double number_moment_oracle(const TruncatedState& ts, int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw ValidationError("moment orders must be >= 0");
  const Eigen::VectorXd p = number_distribution(ts);
  double acc = 0;
  if (ts.mode_dims.size() == 1) {
    if (n2 != 0) throw ValidationError("second moment order given for a one-mode state");
    for (int n = 0; n < ts.mode_dims[0]; ++n) acc += p[n] * std::pow(double(n), n1);
  } else {
    const int d2 = ts.mode_dims[1];
    for (int i = 0; i < ts.mode_dims[0]; ++i)
      for (int j = 0; j < d2; ++j)
        acc += p[i * d2 + j] * std::pow(double(i), n1) * std::pow(double(j), n2);
  }
  return acc;
}

G2Resultd g2_oracle(const TruncatedState& ts) {
  require_state(ts);
  if (!(ts.tail_mass < 1e-6))
    throw NumericalError("tail mass breach: truncated basis too small for g2_oracle");
  const Eigen::VectorXd p = number_distribution(ts);
  double num = 0, mean = 0;
  if (ts.mode_dims.size() == 1) {
    for (int n = 0; n < ts.mode_dims[0]; ++n) {
      num += p[n] * double(n) * double(n - 1);
      mean += p[n] * double(n);
    }
  } else {
    const int d2 = ts.mode_dims[1];
    for (int i = 0; i < ts.mode_dims[0]; ++i) {
      for (int j = 0; j < d2; ++j) {
        const double w = p[i * d2 + j];
        num += w * (double(i) * double(i - 1) + double(j) * double(j - 1) + 2.0 * double(i) * double(j));
        mean += w * double(i + j);
      }
    }
  }
  if (mean <= 1e-12) throw ValidationError("g2 undefined for zero mean photon number");
  return {num / (mean * mean), G2Method::oracle, std::nullopt};
}

namespace {

// Average of all distinct orderings of n creation and n annihilation operators.
CMatrix symmetrized_power(const CMatrix& a, int n) {
  const auto dim = a.rows();
  if (n == 0) return CMatrix::Identity(dim, dim);
  const CMatrix ad = a.adjoint();
  CMatrix acc = CMatrix::Zero(dim, dim);
  long count = 0;
  const int slots = 2 * n;
  for (unsigned mask = 0; mask < (1u << slots); ++mask) {
    if (std::popcount(mask) != n) continue;  // bit set -> a^dag in that slot
    CMatrix prod = CMatrix::Identity(dim, dim);
    for (int s = 0; s < slots; ++s) prod = prod * ((mask >> s) & 1u ? ad : a);
    acc += prod;
    ++count;
  }
  return acc / double(count);
}

}  // namespace

double symmetric_moment_oracle(const TruncatedState& ts, int n1, int n2) {
  require_state(ts);
  if (n1 < 0 || n1 > 4 || n2 < 0 || n2 > 4)
    throw ValidationError("symmetric_moment_oracle supports per-mode orders 0..4");
  const double tr = ts.rho.trace().real();
  if (!(tr > 0)) throw NumericalError("truncated state has vanished trace");

  if (ts.mode_dims.size() == 1) {
    if (n2 != 0) throw ValidationError("second moment order given for a one-mode state");
    const CMatrix m = symmetrized_power(annihilation(ts.mode_dims[0]), n1);
    return (ts.rho * m).trace().real() / tr;
  }

  const int d1 = ts.mode_dims[0], d2 = ts.mode_dims[1];
  const CMatrix ma = symmetrized_power(annihilation(d1), n1);
  const CMatrix mb = symmetrized_power(annihilation(d2), n2);
  // tr[rho (Ma x Mb)] without forming the Kronecker product.
  Complex acc = 0;
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k) {
      if (ma(k, i) == Complex(0, 0)) continue;
      Complex inner = 0;
      for (int j = 0; j < d2; ++j)
        for (int l = 0; l < d2; ++l) inner += ts.rho(i * d2 + j, k * d2 + l) * mb(l, j);
      acc += ma(k, i) * inner;
    }
  return acc.real() / tr;
}

CMatrix partial_trace(const TruncatedState& ts, int keep_mode) {
  require_state(ts);
  if (ts.mode_dims.size() != 2) throw ValidationError("partial_trace requires a two-mode state");
  if (keep_mode != 0 && keep_mode != 1) throw ValidationError("keep_mode must be 0 or 1");
  const int d1 = ts.mode_dims[0], d2 = ts.mode_dims[1];
  const int dk = keep_mode == 0 ? d1 : d2;
  const int dt = keep_mode == 0 ? d2 : d1;
  CMatrix out = CMatrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int k = 0; k < dk; ++k) {
      Complex acc = 0;
      for (int j = 0; j < dt; ++j)
        acc += keep_mode == 0 ? ts.rho(i * d2 + j, k * d2 + j) : ts.rho(j * d2 + i, j * d2 + k);
      out(i, k) = acc;
    }
  return out;
}

double unitarity_defect(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace g2cm::fock
