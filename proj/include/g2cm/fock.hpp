#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "g2cm/g2.hpp"
#include "g2cm/states.hpp"

// Brute-force reference implementation in a truncated Fock basis.  Everything here is
// built directly from the operator definitions (thermal diagonal conjugated by
// exponentiated displacement/squeezing generators) so it can serve as an independent
// check of the covariance-matrix formulas.  Transparency is preferred over speed.
namespace g2cm::fock {

using CMatrix = Eigen::MatrixXcd;

// Density matrix in the truncated joint Fock basis.  For two modes the flattened index
// is n1 * dim2 + n2.
struct TruncatedState {
  std::vector<int> mode_dims;
  CMatrix rho;  // Hermitian, positive semidefinite, trace <= 1
  // max(1 - trace(rho), population of the top two Fock levels of each mode).  The trace
  // deficit alone cannot flag an undersized box: displacement and squeezing generators
  // are anti-Hermitian, so their truncated exponentials stay exactly unitary and a pure
  // state keeps trace 1 no matter how badly it is clipped.  Edge occupancy catches that.
  double tail_mass{0};
  bool tail_ok{true};  // tail_mass was within the tolerance requested at build time
};

CMatrix annihilation(int dim);

// exp(alpha a^dag - conj(alpha) a), exactly unitary for any truncation.
CMatrix displacement_matrix(std::complex<double> alpha, int dim);

// exp[(xi (a^dag)^2 - conj(xi) a^2)/2] with xi = r e^{i psi}.  This is the convention
// whose covariance matrix cm_single produces; the agreement is enforced in the tests.
CMatrix squeeze_matrix(double r, double psi, int dim);

// exp(xi a^dag b^dag - conj(xi) a b) on the joint basis, assembled block-by-block over
// the conserved photon-number difference n1 - n2.
CMatrix two_mode_squeeze_matrix(double r, double psi, int dim_per_mode);

TruncatedState build_single(const SingleModeStated& s, int dim = 200, double tail_tol = 1e-8);
TruncatedState build_two_mode(const TwoModeStated& s, int dim_per_mode = 60, double tail_tol = 1e-8);

// Doubling escalation until tail_mass <= 1e-10 or the cap is hit (then NumericalError).
TruncatedState build_single_auto(const SingleModeStated& s, int dim = 200, int dim_cap = 800);
TruncatedState build_two_mode_auto(const TwoModeStated& s, int dim_per_mode = 60, int dim_cap = 80);

// Joint photon-number distribution (flattened for two modes), normalized by trace(rho).
Eigen::VectorXd number_distribution(const TruncatedState& ts);

// <N_1^n1 N_2^n2> from the number distribution.
double number_moment_oracle(const TruncatedState& ts, int n1, int n2 = 0);

// g2(0) of the single mode, or of the combined field for a two-mode state.
// Requires tail_mass < 1e-6; states near that bound still carry g2 errors well below
// the 1e-5 agreement the reference grids enforce.
G2Resultd g2_oracle(const TruncatedState& ts);

// <[(a^dag)^n1 a^n1]_s [(b^dag)^n2 b^n2]_s> with the symmetrization done as an explicit
// average over all operator orderings (per mode), n1, n2 <= 4.
double symmetric_moment_oracle(const TruncatedState& ts, int n1, int n2 = 0);

// Reduced density matrix of one mode of a two-mode state.
CMatrix partial_trace(const TruncatedState& ts, int keep_mode);

// max |(U^dag U - I)_{ij}|: sanity monitor for the exponentiated generators.
double unitarity_defect(const CMatrix& u);

}  // namespace g2cm::fock
