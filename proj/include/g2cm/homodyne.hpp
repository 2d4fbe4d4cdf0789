#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "g2cm/covariance.hpp"
#include "g2cm/states.hpp"

namespace g2cm {

struct PhaseEntry {
  double theta{0};
  std::size_t n_samples{0};
};

using PhaseSchedule = std::vector<PhaseEntry>;

// Phases 0, pi/2, pi/4, -pi/4: enough to estimate both diagonal variances and the
// qp covariance of one mode.
PhaseSchedule default_schedule(std::size_t n_per_phase = 100000);

struct QuadratureStats {
  double mean{0};
  double variance{0};
};

// Mean and variance of x_theta for a one-mode Gaussian state:
//   mean = cos(theta) X_q + sin(theta) X_p
//   var  = cos^2 sigma_qq + sin^2 sigma_pp + 2 sin cos sigma_qp
QuadratureStats quadrature_stats(const CovarianceMatrixd& sigma, const FirstMomentsd& x,
                                 double theta);

struct TraceMeta {
  std::uint64_t seed{0};
  PhaseSchedule schedule;
  std::string convention{"vacuum-variance=1/2"};
  std::string rng{"mt19937_64/splitmix64-substreams/box-muller"};
  std::string timestamp;  // ISO 8601 UTC; informational, never used in computation
  std::optional<SingleModeStated> true_state;
  std::optional<double> efficiency;  // reserved for detector efficiency, not yet applied
};

// Sampled quadrature records (theta[i], value[i]), grouped per schedule entry in
// schedule order.
struct HomodyneTrace {
  std::vector<double> theta;
  std::vector<double> value;
  TraceMeta meta;
};

/**
 * Draw exact normal samples of x_theta for every schedule entry.
 *
 * Each entry uses an independent substream seeded by splitmix64 from (seed, entry
 * index), so results are byte-identical across runs and independent of entry order
 * execution.  Sampling is Box-Muller on mt19937_64 output; no standard-library
 * distributions are used, keeping streams identical across standard libraries.
 */
HomodyneTrace simulate_trace(const SingleModeStated& s, const PhaseSchedule& schedule,
                             std::uint64_t seed);

namespace rng {

// k-th element of the splitmix64 stream started at `seed`; used to derive substream seeds.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k);

// Deterministic standard-normal sampler: Box-Muller over mt19937_64 bits.  Avoids
// std::normal_distribution, whose output differs between standard libraries.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (double((rng_() >> 11)) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = double(rng_() >> 11) * 0x1.0p-53;            // [0, 1)
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
  }

 private:
  std::mt19937_64 rng_;
  double spare_{0};
  bool have_spare_{false};
};

}  // namespace rng

}  // namespace g2cm
