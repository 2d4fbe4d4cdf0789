#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "g2cm/g2.hpp"
#include "g2cm/homodyne.hpp"
#include "g2cm/states.hpp"

namespace g2cm {

struct PhaseSummary {
  double theta{0};
  std::size_t n{0};
  double skewness{0};
  double excess_kurtosis{0};
};

// Moment-based normality screen: for Gaussian data the sample skewness and excess
// kurtosis are zero with standard errors sqrt(6/n) and sqrt(24/n); each phase must stay
// within sigma_threshold standard errors.
struct GaussianityReport {
  std::vector<PhaseSummary> phases;
  double sigma_threshold{5.0};
  bool pass{true};
};

struct FitResult {
  SingleModeStated state;
  bool psi_degenerate{false};  // r ~ 0 leaves the squeezing phase undetermined
};

struct BootstrapCI {
  double low{0};
  double high{0};
  double std_error{0};
};

struct EstimateOptions {
  int bootstrap_resamples{1000};
  std::uint64_t seed{1};
  double gaussianity_sigmas{5.0};
};

struct ReconstructionResult {
  CovarianceMatrixd cm;
  FirstMomentsd x;
  bool cm_physical{false};
  std::optional<FitResult> fitted;  // present only when the fit is well defined
  G2Resultd g2;                     // method = estimated, uncertainty = bootstrap SE
  BootstrapCI g2_ci;
  GaussianityReport gaussianity;
  std::vector<std::string> warnings;
};

/**
 * Single-mode state reconstruction from a quadrature trace containing phases
 * 0, pi/2, pi/4 and -pi/4 (matched modulo 2 pi within 1e-9):
 *
 *   X_q = <x_0>, X_p = <x_{pi/2}>
 *   sigma_qq, sigma_pp: unbiased sample variances at 0 and pi/2
 *   sigma_qp = (<x^2_{pi/4}> - <x^2_{-pi/4}>)/2 - X_q X_p   (raw second moments)
 *
 * An unphysical reconstructed covariance matrix is flagged, never projected.  g2 comes
 * from the moment pipeline on (cm, x) with a percentile-bootstrap confidence interval.
 */
ReconstructionResult reconstruct(const HomodyneTrace& trace, const EstimateOptions& opts = {});

// Invert cm_single: n_th from sqrt(det sigma), r from the trace, psi from
// atan2(2 sigma_qp, sigma_qq - sigma_pp), alpha from the first moments.
FitResult fit_state_params(const CovarianceMatrixd& sigma, const FirstMomentsd& x);

// Percentile bootstrap for the g2 estimate: per-phase resampling with replacement,
// resample b drawn from substream splitmix64(seed, b); order-independent by aggregation.
BootstrapCI bootstrap_ci(const HomodyneTrace& trace, int resamples, std::uint64_t seed);

GaussianityReport gaussianity_check(const HomodyneTrace& trace, double sigma_threshold = 5.0);

}  // namespace g2cm
