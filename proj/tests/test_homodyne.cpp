#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "g2cm/homodyne.hpp"

using namespace g2cm;
using doctest::Approx;

namespace {

struct SampleStats {
  double mean{0};
  double variance{0};
};

SampleStats stats_of(const std::vector<double>& v, std::size_t begin, std::size_t count) {
  double mean = 0;
  for (std::size_t i = 0; i < count; ++i) mean += v[begin + i];
  mean /= double(count);
  double ss = 0;
  for (std::size_t i = 0; i < count; ++i) ss += std::pow(v[begin + i] - mean, 2);
  return {mean, ss / double(count - 1)};
}

}  // namespace

TEST_CASE("quadrature statistics of the vacuum are isotropic") {
  const auto [sigma, x] = cm_single(SingleModeStated({0, 0}, {0, 0}, 0.0));
  for (const double theta : {0.0, 0.3, M_PI / 2, 2.0, -1.1}) {
    const auto st = quadrature_stats(sigma, x, theta);
    CHECK(st.mean == 0.0);
    CHECK(st.variance == Approx(vacuum_variance).epsilon(1e-15));
  }
}

TEST_CASE("quadrature statistics of the amplitude-squeezed benchmark state") {
  const auto [sigma, x] = cm_single(SingleModeStated({2, 0}, {0.5, M_PI}, 0.14));
  const auto q = quadrature_stats(sigma, x, 0.0);
  CHECK(q.mean == Approx(2 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(q.variance == Approx(0.64 * std::exp(-1.0)).epsilon(1e-14));  // below vacuum noise
  const auto p = quadrature_stats(sigma, x, M_PI / 2);
  CHECK(p.mean == Approx(0.0));
  CHECK(p.variance == Approx(0.64 * std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("diagonal-phase second moments expose the qp covariance") {
  const auto [sigma, x] = cm_single(SingleModeStated({1.1, -0.6}, {0.5, 0.9}, 0.2));
  const auto plus = quadrature_stats(sigma, x, M_PI / 4);
  const auto minus = quadrature_stats(sigma, x, -M_PI / 4);
  const double raw2_plus = plus.variance + plus.mean * plus.mean;
  const double raw2_minus = minus.variance + minus.mean * minus.mean;
  CHECK(raw2_plus - raw2_minus == Approx(2 * sigma(0, 1) + 2 * x[0] * x[1]).epsilon(1e-13));
}

TEST_CASE("quadrature statistics validate their inputs") {
  const auto [sigma, x] = cm_single(SingleModeStated({0, 0}, {0, 0}, 0.0));
  CHECK_THROWS_AS(quadrature_stats(sigma, x, std::nan("")), ValidationError);
  CovarianceMatrixd bad = 0.1 * CovarianceMatrixd::Identity(2, 2);
  CHECK_THROWS_AS(quadrature_stats(bad, x, 0.0), ValidationError);
  const auto [sigma4, x4] = cm_two_mode(TwoModeStated({0, 0}, {0, 0}, {0, 0}, 0, 0));
  CHECK_THROWS_AS(quadrature_stats(sigma4, x4, 0.0), ValidationError);
}

TEST_CASE("default schedule covers the reconstruction phases") {
  const auto sched = default_schedule(5000);
  REQUIRE(sched.size() == 4);
  CHECK(sched[0].theta == 0.0);
  CHECK(sched[1].theta == M_PI / 2);
  CHECK(sched[2].theta == M_PI / 4);
  CHECK(sched[3].theta == -M_PI / 4);
  for (const auto& e : sched) CHECK(e.n_samples == 5000);
}

TEST_CASE("simulation is deterministic and ordered by schedule") {
  const SingleModeStated s({1, 0}, {0.4, M_PI}, 0.1);
  const auto sched = default_schedule(500);
  const auto a = simulate_trace(s, sched, 42);
  const auto b = simulate_trace(s, sched, 42);
  REQUIRE(a.value.size() == 2000);
  CHECK(a.value == b.value);
  CHECK(a.theta == b.theta);
  // Records appear grouped per entry, in schedule order.
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 500; ++k) CHECK(a.theta[i * 500 + k] == sched[i].theta);

  const auto c = simulate_trace(s, sched, 43);
  CHECK(a.value != c.value);
}

TEST_CASE("each schedule entry draws from an independent substream") {
  // Removing later entries must not disturb earlier ones.
  const SingleModeStated s({0.5, 0}, {0.3, 0}, 0.0);
  const auto full = simulate_trace(s, default_schedule(300), 7);
  const auto prefix = simulate_trace(s, {{0.0, 300}}, 7);
  for (std::size_t k = 0; k < 300; ++k) CHECK(full.value[k] == prefix.value[k]);
}

TEST_CASE("sampled moments match the analytic quadrature statistics") {
  const SingleModeStated s({2, 0}, {0.5, M_PI}, 0.14);
  const auto [sigma, x] = cm_single(s);
  const std::size_t n = 100000;
  const auto trace = simulate_trace(s, default_schedule(n), 12345);
  for (std::size_t i = 0; i < 4; ++i) {
    const double theta = trace.meta.schedule[i].theta;
    const auto expect = quadrature_stats(sigma, x, theta);
    const auto got = stats_of(trace.value, i * n, n);
    // 5 sigma bands from the exact sampling distributions of mean and variance.
    const double se_mean = std::sqrt(expect.variance / double(n));
    const double se_var = expect.variance * std::sqrt(2.0 / double(n - 1));
    CHECK(std::abs(got.mean - expect.mean) < 5 * se_mean);
    CHECK(std::abs(got.variance - expect.variance) < 5 * se_var);
  }
}

TEST_CASE("vacuum samples reproduce the vacuum variance") {
  const std::size_t n = 1000000;
  const auto trace = simulate_trace(SingleModeStated({0, 0}, {0, 0}, 0.0), {{0.0, n}}, 99);
  const auto got = stats_of(trace.value, 0, n);
  CHECK(std::abs(got.mean) < 5 * std::sqrt(vacuum_variance / double(n)));
  CHECK(std::abs(got.variance - vacuum_variance) <
        5 * vacuum_variance * std::sqrt(2.0 / double(n - 1)));
}

TEST_CASE("simulation validates its schedule") {
  const SingleModeStated s({0, 0}, {0, 0}, 0.0);
  CHECK_THROWS_AS(simulate_trace(s, {}, 1), ValidationError);
  CHECK_THROWS_AS(simulate_trace(s, {{0.0, 0}}, 1), ValidationError);
  CHECK_THROWS_AS(simulate_trace(s, {{std::nan(""), 10}}, 1), ValidationError);
}

TEST_CASE("trace metadata records the provenance") {
  const SingleModeStated s({1, 0.5}, {0.2, 1.0}, 0.05);
  const auto trace = simulate_trace(s, default_schedule(10), 77);
  CHECK(trace.meta.seed == 77);
  CHECK(trace.meta.schedule.size() == 4);
  CHECK(trace.meta.convention == "vacuum-variance=1/2");
  CHECK(trace.meta.rng.find("mt19937_64") != std::string::npos);
  REQUIRE(trace.meta.true_state.has_value());
  CHECK(trace.meta.true_state->alpha == std::complex<double>(1, 0.5));
  CHECK(trace.meta.true_state->n_th == 0.05);
  CHECK_FALSE(trace.meta.timestamp.empty());
}

TEST_CASE("splitmix64 substream seeds are stable") {
  // Pinned values guard against accidental reseeding changes that would break
  // reproducibility of archived traces.
  CHECK(rng::splitmix64_at(0, 0) == 16294208416658607535ull);
  CHECK(rng::splitmix64_at(0, 1) == 7960286522194355700ull);
  CHECK(rng::splitmix64_at(1, 0) != rng::splitmix64_at(0, 0));
}

TEST_CASE("normal sampler moments are close to standard normal") {
  rng::NormalSampler normal(2024);
  const int n = 200000;
  double mean = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = normal();
    mean += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  mean /= n;
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(m2 - 1.0) < 5 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 - 3.0) < 5 * std::sqrt(96.0 / n));
}
