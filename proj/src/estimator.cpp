#include "g2cm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "g2cm/chi_moments.hpp"
#include "g2cm/covariance.hpp"

namespace g2cm {

namespace {

constexpr double phase_match_tol = 1e-9;

bool same_phase(double a, double b) {
  const double d = std::abs(a - b);
  return d < phase_match_tol || std::abs(d - 2 * M_PI) < phase_match_tol;
}

struct PhaseGroup {
  double theta{0};  // normalized representative
  std::vector<std::size_t> idx;
};

std::vector<PhaseGroup> group_phases(const HomodyneTrace& trace) {
  if (trace.theta.size() != trace.value.size())
    throw ValidationError("trace theta/value lengths differ");
  if (trace.theta.empty()) throw ValidationError("trace is empty");
  std::vector<PhaseGroup> groups;
  for (std::size_t i = 0; i < trace.theta.size(); ++i) {
    if (!std::isfinite(trace.theta[i]) || !std::isfinite(trace.value[i]))
      throw ValidationError("trace contains non-finite entries");
    const double na = normalize_angle(trace.theta[i]);
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const PhaseGroup& g) { return same_phase(g.theta, na); });
    if (it == groups.end()) {
      groups.push_back({na, {}});
      it = std::prev(groups.end());
    }
    it->idx.push_back(i);
  }
  return groups;
}

const PhaseGroup* find_group(const std::vector<PhaseGroup>& groups, double target) {
  const double na = normalize_angle(target);
  for (const auto& g : groups)
    if (same_phase(g.theta, na)) return &g;
  return nullptr;
}

struct GroupStats {
  std::size_t n{0};
  double mean{0};
  double var_unbiased{0};
  double raw2{0};  // mean of squares
};

GroupStats stats_of(const std::vector<double>& value, const std::vector<std::size_t>& idx) {
  GroupStats s;
  s.n = idx.size();
  if (s.n < 2) throw ValidationError("each phase needs at least two samples");
  double sum = 0;
  for (const std::size_t i : idx) sum += value[i];
  s.mean = sum / double(s.n);
  double ss = 0;
  for (const std::size_t i : idx) {
    const double d = value[i] - s.mean;
    ss += d * d;
  }
  s.var_unbiased = ss / double(s.n - 1);
  s.raw2 = ss / double(s.n) + s.mean * s.mean;
  return s;
}

// g2 point statistic from the four phase summaries.  Deliberately unguarded: bootstrap
// resamples must not throw, and clamping here would bias the percentile interval.
double raw_g2(const GroupStats& q, const GroupStats& p, const GroupStats& dp,
              const GroupStats& dm) {
  const double sqq = q.var_unbiased;
  const double spp = p.var_unbiased;
  const double sqp = (dp.raw2 - dm.raw2) / 2 - q.mean * p.mean;
  const double occ = (sqq + spp) / 2;
  const std::complex<double> anom((sqq - spp) / 2, sqp);
  const std::complex<double> mean(q.mean / std::sqrt(2.0), p.mean / std::sqrt(2.0));
  const double m1 = m1_sym(occ, mean);
  const double m2 = m2_sym(occ, anom, mean);
  const double den = 2 * m1 - 1;
  return 2 * (2 * m2 - 4 * m1 + 1) / (den * den);
}

std::vector<double> extract(const std::vector<double>& value, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (const std::size_t i : idx) out.push_back(value[i]);
  return out;
}

// Unbiased uniform index in [0, n) via rejection; avoids std::uniform_int_distribution,
// whose stream is standard-library specific.
std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
  const std::uint64_t nn = n;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % nn;
  std::uint64_t r;
  do {
    r = gen();
  } while (r >= limit);
  return static_cast<std::size_t>(r % nn);
}

GroupStats resampled_stats(const std::vector<double>& vals, std::mt19937_64& gen,
                           std::vector<double>& scratch) {
  const std::size_t n = vals.size();
  scratch.resize(n);
  double sum = 0, sum2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = vals[uniform_index(gen, n)];
    scratch[i] = v;
    sum += v;
    sum2 += v * v;
  }
  GroupStats s;
  s.n = n;
  s.mean = sum / double(n);
  s.raw2 = sum2 / double(n);
  // Two-pass variance: a resample of identical values must come out exactly zero, so a
  // degenerate trace collapses to an exactly zero-width interval.
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = scratch[i] - s.mean;
    ss += d * d;
  }
  s.var_unbiased = ss / double(n - 1);
  return s;
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * double(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - double(lo);
  return sorted[lo] * (1 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

FitResult fit_state_params(const CovarianceMatrixd& sigma, const FirstMomentsd& x) {
  detail::require_covariance_shape(sigma);
  if (sigma.rows() != 2) throw ValidationError("state fit is defined for one mode");
  if (x.size() != 2)
    throw ValidationError("first-moment vector length must match covariance dimension");
  const double det = sigma(0, 0) * sigma(1, 1) - sigma(0, 1) * sigma(0, 1);
  if (!(det > 0)) throw ValidationError("covariance matrix is not positive definite");
  const double rtdet = std::sqrt(det);
  // det sigma = ((1+2n)/2)^2 and tr sigma / (2 sqrt(det)) = cosh 2r invert the state map;
  // sampling noise can push either invariant slightly past its bound, so clamp.
  const double n_th = std::max(0.0, rtdet - 0.5);
  const double c2r = std::max(1.0, (sigma(0, 0) + sigma(1, 1)) / (2 * rtdet));
  const double r = 0.5 * std::acosh(c2r);
  FitResult fit;
  fit.psi_degenerate = r < 1e-9;
  const double psi =
      fit.psi_degenerate ? 0.0 : std::atan2(2 * sigma(0, 1), sigma(0, 0) - sigma(1, 1));
  const std::complex<double> alpha(x[0] / std::sqrt(2.0), x[1] / std::sqrt(2.0));
  fit.state = SingleModeStated(alpha, SqueezingParamd(r, psi), n_th);
  return fit;
}

GaussianityReport gaussianity_check(const HomodyneTrace& trace, double sigma_threshold) {
  if (!(sigma_threshold > 0)) throw ValidationError("gaussianity threshold must be > 0");
  const auto groups = group_phases(trace);
  GaussianityReport rep;
  rep.sigma_threshold = sigma_threshold;
  for (const auto& g : groups) {
    const std::size_t n = g.idx.size();
    if (n < 8) throw ValidationError("gaussianity screen needs at least 8 samples per phase");
    double sum = 0;
    for (const std::size_t i : g.idx) sum += trace.value[i];
    const double mean = sum / double(n);
    double m2 = 0, m3 = 0, m4 = 0;
    for (const std::size_t i : g.idx) {
      const double d = trace.value[i] - mean;
      const double d2 = d * d;
      m2 += d2;
      m3 += d2 * d;
      m4 += d2 * d2;
    }
    m2 /= double(n);
    m3 /= double(n);
    m4 /= double(n);
    PhaseSummary ps;
    ps.theta = g.theta;
    ps.n = n;
    if (m2 > 0) {
      ps.skewness = m3 / std::pow(m2, 1.5);
      ps.excess_kurtosis = m4 / (m2 * m2) - 3;
      const bool ok = std::abs(ps.skewness) <= sigma_threshold * std::sqrt(6.0 / double(n)) &&
                      std::abs(ps.excess_kurtosis) <= sigma_threshold * std::sqrt(24.0 / double(n));
      rep.pass = rep.pass && ok;
    } else {
      rep.pass = false;  // a constant signal is not a homodyne quadrature
    }
    rep.phases.push_back(ps);
  }
  return rep;
}

BootstrapCI bootstrap_ci(const HomodyneTrace& trace, int resamples, std::uint64_t seed) {
  if (resamples < 100) throw ValidationError("bootstrap needs at least 100 resamples");
  const auto groups = group_phases(trace);
  const PhaseGroup* gq = find_group(groups, 0.0);
  const PhaseGroup* gp = find_group(groups, M_PI / 2);
  const PhaseGroup* gdp = find_group(groups, M_PI / 4);
  const PhaseGroup* gdm = find_group(groups, -M_PI / 4);
  if (!gq || !gp || !gdp || !gdm)
    throw ValidationError("trace must contain phases 0, pi/2, pi/4 and -pi/4");

  const std::vector<double> vq = extract(trace.value, gq->idx);
  const std::vector<double> vp = extract(trace.value, gp->idx);
  const std::vector<double> vdp = extract(trace.value, gdp->idx);
  const std::vector<double> vdm = extract(trace.value, gdm->idx);

  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(resamples));
  std::vector<double> scratch;
  for (int b = 0; b < resamples; ++b) {
    // Independent substream per resample keeps the set reproducible regardless of count.
    std::mt19937_64 gen(rng::splitmix64_at(seed, static_cast<std::uint64_t>(b)));
    const GroupStats q = resampled_stats(vq, gen, scratch);
    const GroupStats p = resampled_stats(vp, gen, scratch);
    const GroupStats dp = resampled_stats(vdp, gen, scratch);
    const GroupStats dm = resampled_stats(vdm, gen, scratch);
    const double v = raw_g2(q, p, dp, dm);
    if (std::isfinite(v)) stats.push_back(v);
  }
  if (stats.size() < static_cast<std::size_t>(resamples) / 2)
    throw NumericalError("bootstrap produced too few finite resamples");

  std::sort(stats.begin(), stats.end());
  BootstrapCI ci;
  if (stats.front() == stats.back()) {
    // Every resample produced the same statistic (degenerate trace): exactly zero width.
    ci.low = ci.high = stats.front();
    ci.std_error = 0.0;
    return ci;
  }
  double mean = 0;
  for (const double v : stats) mean += v;
  mean /= double(stats.size());
  double ss = 0;
  for (const double v : stats) ss += (v - mean) * (v - mean);
  ci.low = quantile(stats, 0.025);
  ci.high = quantile(stats, 0.975);
  ci.std_error = std::sqrt(ss / double(stats.size() - 1));
  return ci;
}

ReconstructionResult reconstruct(const HomodyneTrace& trace, const EstimateOptions& opts) {
  const auto groups = group_phases(trace);
  const PhaseGroup* gq = find_group(groups, 0.0);
  const PhaseGroup* gp = find_group(groups, M_PI / 2);
  const PhaseGroup* gdp = find_group(groups, M_PI / 4);
  const PhaseGroup* gdm = find_group(groups, -M_PI / 4);
  if (!gq || !gp || !gdp || !gdm)
    throw ValidationError("trace must contain phases 0, pi/2, pi/4 and -pi/4");
  for (const PhaseGroup* g : {gq, gp, gdp, gdm})
    if (g->idx.size() < 100)
      throw ValidationError("reconstruction needs at least 100 samples per phase");

  ReconstructionResult res;
  if (groups.size() > 4)
    res.warnings.push_back("trace contains additional phases; only 0, pi/2, +/-pi/4 are used");

  const GroupStats sq = stats_of(trace.value, gq->idx);
  const GroupStats sp = stats_of(trace.value, gp->idx);
  const GroupStats sdp = stats_of(trace.value, gdp->idx);
  const GroupStats sdm = stats_of(trace.value, gdm->idx);

  const double sqq = sq.var_unbiased;
  const double spp = sp.var_unbiased;
  const double sqp = (sdp.raw2 - sdm.raw2) / 2 - sq.mean * sp.mean;

  res.cm = CovarianceMatrixd(2, 2);
  res.cm << sqq, sqp, sqp, spp;
  res.x = FirstMomentsd(2);
  res.x << sq.mean, sp.mean;

  res.cm_physical = check_physical(res.cm).physical;
  if (!res.cm_physical)
    res.warnings.push_back(
        "reconstructed covariance matrix is marginally unphysical (sampling noise)");

  try {
    res.fitted = fit_state_params(res.cm, res.x);
  } catch (const ValidationError& err) {
    res.warnings.push_back(std::string("state fit unavailable: ") + err.what());
  }

  // Same unguarded statistic as the bootstrap resamples, so the point estimate sits in
  // the middle of its own resampling distribution.  Noise-driven nonsense is reported
  // (floored at the physical minimum) rather than thrown: a flagged result with
  // warnings is more useful than an exception once real data is in hand.
  double point = raw_g2(sq, sp, sdp, sdm);
  if (!std::isfinite(point)) {
    res.warnings.push_back("moment estimates are degenerate (mean photon number ~ 0)");
    point = 0.0;
  } else if (point < 0) {
    res.warnings.push_back("moment estimates give a negative g2; reporting the floor 0");
    point = 0.0;
  }
  res.g2_ci = bootstrap_ci(trace, opts.bootstrap_resamples, opts.seed);
  res.g2 = {point, G2Method::estimated, res.g2_ci.std_error};

  res.gaussianity = gaussianity_check(trace, opts.gaussianity_sigmas);
  if (!res.gaussianity.pass)
    res.warnings.push_back(
        "quadrature samples fail the Gaussianity screen; estimates assume a Gaussian state");
  return res;
}

}  // namespace g2cm
