#include "g2cm/homodyne.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

namespace g2cm {

PhaseSchedule default_schedule(std::size_t n_per_phase) {
  return {{0.0, n_per_phase},
          {M_PI / 2, n_per_phase},
          {M_PI / 4, n_per_phase},
          {-M_PI / 4, n_per_phase}};
}

QuadratureStats quadrature_stats(const CovarianceMatrixd& sigma, const FirstMomentsd& x,
                                 double theta) {
  if (sigma.rows() != 2) throw ValidationError("quadrature_stats requires a one-mode state");
  if (!std::isfinite(theta)) throw ValidationError("quadrature phase must be finite");
  if (!check_physical(sigma).physical)
    throw ValidationError("covariance matrix is unphysical (symplectic eigenvalue < 1/2)");
  const double c = std::cos(theta), s = std::sin(theta);
  QuadratureStats st;
  st.mean = c * x[0] + s * x[1];
  st.variance = c * c * sigma(0, 0) + s * s * sigma(1, 1) + 2 * s * c * sigma(0, 1);
  return st;
}

namespace rng {

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + (k + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace rng

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

HomodyneTrace simulate_trace(const SingleModeStated& s, const PhaseSchedule& schedule,
                             std::uint64_t seed) {
  if (schedule.empty()) throw ValidationError("phase schedule must not be empty");
  std::size_t total = 0;
  for (const auto& e : schedule) {
    if (e.n_samples == 0) throw ValidationError("schedule entries need n_samples >= 1");
    if (!std::isfinite(e.theta)) throw ValidationError("schedule phases must be finite");
    total += e.n_samples;
  }

  const auto [sigma, x] = cm_single(s);
  HomodyneTrace trace;
  trace.theta.reserve(total);
  trace.value.reserve(total);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto st = quadrature_stats(sigma, x, schedule[i].theta);
    const double sd = std::sqrt(st.variance);
    rng::NormalSampler normal(rng::splitmix64_at(seed, i));
    for (std::size_t k = 0; k < schedule[i].n_samples; ++k) {
      trace.theta.push_back(schedule[i].theta);
      trace.value.push_back(st.mean + sd * normal());
    }
  }
  trace.meta.seed = seed;
  trace.meta.schedule = schedule;
  trace.meta.timestamp = utc_timestamp();
  trace.meta.true_state = s;
  return trace;
}

}  // namespace g2cm
