#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "g2cm/chi_moments.hpp"
#include "g2cm/cli_util.hpp"
#include "g2cm/covariance.hpp"
#include "g2cm/estimator.hpp"
#include "g2cm/fock.hpp"
#include "g2cm/g2.hpp"
#include "g2cm/homodyne.hpp"
#include "g2cm/states.hpp"
#include "g2cm/trace_io.hpp"

namespace {

using nlohmann::json;
using namespace g2cm;

constexpr const char* convention_tag = "vacuum-variance=1/2";

bool near_pi(double psi) { return std::abs(normalize_angle(psi) - M_PI) < 1e-12; }

// Writes to stdout when path is "-", to the file otherwise.
class OutTarget {
 public:
  explicit OutTarget(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit(const json& j, const std::string& out_path) {
  OutTarget out(out_path);
  out.os() << j.dump(2) << '\n';
}

std::string config_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

/**
 * Config support: `--config file.json` may supply any flag of the invoked subcommand.
 * Top-level scalar keys apply when the subcommand declares the flag (so one file can
 * serve several subcommands); keys inside a section named after the subcommand are
 * scoped to it and must all be recognized.  Explicit command-line flags always win:
 * a config key is injected only when its flag is absent from the command line.
 */
std::vector<std::string> apply_config(const CLI::App& app, std::vector<std::string> tokens) {
  if (tokens.empty() || tokens[0].empty() || tokens[0][0] == '-') return tokens;
  const std::string sub_name = tokens[0];
  const CLI::App* sub = app.get_subcommand_no_throw(sub_name);
  if (!sub) return tokens;

  std::string cfg_path;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i] == "--config") {
      if (i + 1 >= tokens.size()) throw ValidationError("--config requires a file path");
      cfg_path = tokens[i + 1];
    } else if (tokens[i].rfind("--config=", 0) == 0) {
      cfg_path = tokens[i].substr(9);
    }
  }
  if (cfg_path.empty()) return tokens;

  std::ifstream in(cfg_path);
  if (!in) throw ValidationError("cannot open config '" + cfg_path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& err) {
    throw ValidationError("config '" + cfg_path + "': " + err.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  std::map<std::string, json> merged;
  std::set<std::string> scoped;
  for (const auto& [key, val] : j.items())
    if (!val.is_object()) merged[key] = val;
  if (const auto sec = j.find(sub_name); sec != j.end()) {
    if (!sec->is_object())
      throw ValidationError("config section '" + sub_name + "' must be an object");
    for (const auto& [key, val] : sec->items()) {
      merged[key] = val;
      scoped.insert(key);
    }
  }

  for (const auto& [key, val] : merged) {
    if (key == "config") continue;
    const std::string flag = "--" + key;
    bool on_cmdline = false;
    for (std::size_t i = 1; i < tokens.size(); ++i)
      if (tokens[i] == flag || tokens[i].rfind(flag + "=", 0) == 0) {
        on_cmdline = true;
        break;
      }
    if (on_cmdline) continue;
    if (!sub->get_option_no_throw(flag)) {
      if (scoped.count(key))
        throw ValidationError("config key '" + sub_name + "." + key + "' is not a flag of '" +
                              sub_name + "'");
      continue;  // shared top-level key meant for another subcommand
    }
    if (val.is_array())
      for (const auto& e : val) tokens.push_back(flag + "=" + config_scalar(e));
    else
      tokens.push_back(flag + "=" + config_scalar(val));
  }
  return tokens;
}

json state_json(const SingleModeStated& s) {
  return {{"alpha_re", s.alpha.real()}, {"alpha_im", s.alpha.imag()},
          {"r", s.xi.r},                {"psi", s.xi.psi},
          {"n_th", s.n_th}};
}

json state_json(const TwoModeStated& s) {
  return {{"alpha_re", s.alpha.real()}, {"alpha_im", s.alpha.imag()},
          {"beta_re", s.beta.real()},   {"beta_im", s.beta.imag()},
          {"r", s.xi.r},                {"psi", s.xi.psi},
          {"n_th1", s.n_th1},           {"n_th2", s.n_th2}};
}

// Shared state flags.  Angles go through parse_angle, so "--psi pi" works.
struct StateFlags {
  double alpha{0};
  double alpha_im{0};
  double beta{0};
  double beta_im{0};
  double r{0};
  std::string psi{"0"};
  double nth{0};
  double nth1{0};
  double nth2{0};

  SingleModeStated single() const {
    return SingleModeStated({alpha, alpha_im}, SqueezingParamd(r, cli::parse_angle(psi)), nth);
  }
  TwoModeStated two_mode() const {
    return TwoModeStated({alpha, alpha_im}, {beta, beta_im},
                         SqueezingParamd(r, cli::parse_angle(psi)), nth1, nth2);
  }
};

void add_single_state_flags(CLI::App* sub, StateFlags& f) {
  sub->add_option("--alpha", f.alpha, "displacement, real part");
  sub->add_option("--alpha-im", f.alpha_im, "displacement, imaginary part");
  sub->add_option("--r", f.r, "squeezing amplitude (>= 0)");
  sub->add_option("--psi", f.psi, "squeezing phase (radians or pi fractions, e.g. pi, -pi/4)");
  sub->add_option("--nth", f.nth, "thermal occupation");
}

void add_two_mode_state_flags(CLI::App* sub, StateFlags& f) {
  sub->add_option("--beta", f.beta, "mode-2 displacement, real part");
  sub->add_option("--beta-im", f.beta_im, "mode-2 displacement, imaginary part");
  sub->add_option("--nth1", f.nth1, "mode-1 thermal occupation");
  sub->add_option("--nth2", f.nth2, "mode-2 thermal occupation");
}

// ---------------------------------------------------------------------------
// g2

struct G2Cmd {
  StateFlags state;
  bool two_mode{false};
  std::string out{"-"};

  void run() const {
    json j;
    j["convention"] = convention_tag;
    if (two_mode) {
      const auto s = state.two_mode();
      const auto res = g2_two_mode(s);
      j["mode"] = "two-mode";
      j["state"] = state_json(s);
      j["value"] = res.value;
      j["method"] = method_name(res.method);
    } else {
      const auto s = state.single();
      const auto pipeline = g2_single_pipeline(s);
      j["mode"] = "single";
      j["state"] = state_json(s);
      j["pipeline"] = pipeline.value;
      if (s.alpha.imag() == 0) {
        const auto closed = g2_single_closed_form(s);
        j["closed_form"] = closed.value;
        j["difference"] = closed.value - pipeline.value;
        j["value"] = closed.value;
      } else {
        j["value"] = pipeline.value;
      }
    }
    emit(j, out);
  }
};

// ---------------------------------------------------------------------------
// threshold

struct ThresholdCmd {
  double r{0};
  std::string psi{"pi"};
  double nth{0};
  bool two_mode_symmetric{false};
  std::string out{"-"};

  void run() const {
    const double psi_v = cli::parse_angle(psi);
    const auto t = two_mode_symmetric ? alpha_threshold_two_mode_symmetric(r, psi_v, nth)
                                      : alpha_threshold(r, psi_v, nth);
    json j;
    j["convention"] = convention_tag;
    j["mode"] = two_mode_symmetric ? "two-mode-symmetric" : "single";
    j["r"] = r;
    j["psi"] = psi_v;
    j["nth"] = nth;
    j["exists"] = t.exists;
    j["alpha_th"] = t.exists ? json(*t.alpha_th) : json(nullptr);
    j["denominator"] = t.denominator;
    j["nonclassical_depth"] = nonclassical_depth(r, nth);
    j["r_threshold"] = r_threshold(nth);
    if (!two_mode_symmetric && near_pi(psi_v)) {
      const auto amin = alpha_min_pi(r, nth);
      j["alpha_min"] = amin ? json(*amin) : json(nullptr);
    }
    emit(j, out);
  }
};

// ---------------------------------------------------------------------------
// scan

struct ScanCmd {
  std::string mode{"single"};
  std::vector<std::string> sweeps;
  StateFlags fixed;
  std::string out{"-"};

  void run() const {
    const bool two = mode == "two-mode";
    if (!two && mode != "single")
      throw ValidationError("scan mode must be 'single' or 'two-mode'");
    if (sweeps.empty()) throw ValidationError("scan needs at least one --sweep axis");

    const std::set<std::string> allowed =
        two ? std::set<std::string>{"alpha", "beta", "r", "psi", "nth1", "nth2"}
            : std::set<std::string>{"alpha", "r", "psi", "nth"};
    std::vector<cli::SweepAxis> axes;
    std::set<std::string> seen;
    for (const auto& token : sweeps) {
      auto ax = cli::parse_sweep(token);
      if (!allowed.count(ax.name))
        throw ValidationError("cannot sweep '" + ax.name + "' in mode " + mode);
      if (!seen.insert(ax.name).second)
        throw ValidationError("duplicate sweep axis '" + ax.name + "'");
      axes.push_back(std::move(ax));
    }

    std::map<std::string, double> p = {{"alpha", fixed.alpha},
                                       {"r", fixed.r},
                                       {"psi", cli::parse_angle(fixed.psi)},
                                       {"nth", fixed.nth},
                                       {"beta", fixed.beta},
                                       {"nth1", fixed.nth1},
                                       {"nth2", fixed.nth2}};

    OutTarget target(out);
    std::ostream& os = target.os();
    os << (two ? "alpha,beta,r,psi,nth1,nth2,g2"
               : "alpha,r,psi,nth,g2_closed_form,g2_pipeline,alpha_th,alpha_min,"
                 "threshold_denominator,nonclassical_depth")
       << '\n';

    // Row-major over the sweep axes in the order given (last axis fastest).
    std::vector<int> idx(axes.size(), 0);
    while (true) {
      for (std::size_t k = 0; k < axes.size(); ++k)
        p[axes[k].name] = axes[k].values()[static_cast<std::size_t>(idx[k])];
      if (two)
        emit_two_mode_row(os, p);
      else
        emit_single_row(os, p);
      int k = static_cast<int>(axes.size()) - 1;
      while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == axes[static_cast<std::size_t>(k)].steps) {
        idx[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
    }
    if (!os) throw ValidationError("write failed on '" + out + "'");
  }

  // Undefined quantities (vacuum g2, threshold without squeezing or outside its
  // existence region) leave empty CSV cells rather than aborting the scan.
  static void emit_single_row(std::ostream& os, const std::map<std::string, double>& p) {
    const double alpha = p.at("alpha"), r = p.at("r"), psi = p.at("psi"), nth = p.at("nth");
    const SingleModeStated s({alpha, 0}, SqueezingParamd(r, psi), nth);
    std::string g2c, g2p, ath, amin, den;
    try {
      g2c = format_double(g2_single_closed_form(s).value);
      g2p = format_double(g2_single_pipeline(s).value);
    } catch (const ValidationError&) {
    }
    try {
      const auto t = alpha_threshold(r, psi, nth);
      den = format_double(t.denominator);
      if (t.exists) ath = format_double(*t.alpha_th);
      if (near_pi(psi)) {
        const auto am = alpha_min_pi(r, nth);
        if (am) amin = format_double(*am);
      }
    } catch (const ValidationError&) {
    }
    os << format_double(alpha) << ',' << format_double(r) << ',' << format_double(psi) << ','
       << format_double(nth) << ',' << g2c << ',' << g2p << ',' << ath << ',' << amin << ','
       << den << ',' << format_double(nonclassical_depth(r, nth)) << '\n';
  }

  static void emit_two_mode_row(std::ostream& os, const std::map<std::string, double>& p) {
    const double alpha = p.at("alpha"), beta = p.at("beta"), r = p.at("r"), psi = p.at("psi");
    const double nth1 = p.at("nth1"), nth2 = p.at("nth2");
    const TwoModeStated s({alpha, 0}, {beta, 0}, SqueezingParamd(r, psi), nth1, nth2);
    std::string g2;
    try {
      g2 = format_double(g2_two_mode(s).value);
    } catch (const ValidationError&) {
    }
    os << format_double(alpha) << ',' << format_double(beta) << ',' << format_double(r) << ','
       << format_double(psi) << ',' << format_double(nth1) << ',' << format_double(nth2) << ','
       << g2 << '\n';
  }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateCmd {
  StateFlags state;
  std::uint64_t seed{12345};
  std::size_t samples{100000};
  std::vector<std::string> phases;  // "theta:count" overrides the default schedule
  std::string trace_out;

  void run() const {
    PhaseSchedule schedule;
    if (phases.empty()) {
      schedule = default_schedule(samples);
    } else {
      for (const auto& token : phases) {
        const std::size_t colon = token.rfind(':');
        if (colon == std::string::npos)
          throw ValidationError("phase must look like theta:count, got '" + token + "'");
        double count = 0;
        if (!cli::parse_real(token.substr(colon + 1), count) || count < 1 ||
            count != std::floor(count))
          throw ValidationError("phase sample count must be a positive integer in '" + token + "'");
        schedule.push_back({cli::parse_angle(token.substr(0, colon)),
                            static_cast<std::size_t>(count)});
      }
    }
    const auto trace = simulate_trace(state.single(), schedule, seed);
    write_trace(trace_out, trace);
    json j;
    j["out"] = trace_out;
    j["meta"] = meta_path_for(trace_out);
    j["records"] = trace.theta.size();
    j["seed"] = seed;
    std::cout << j.dump(2) << '\n';
  }
};

// ---------------------------------------------------------------------------
// estimate

struct EstimateCmd {
  std::string trace_in;
  int bootstrap{1000};
  std::uint64_t seed{1};
  double gauss_sigmas{5.0};
  std::string out{"-"};

  void run() const {
    const auto trace = read_trace(trace_in);
    EstimateOptions opts;
    opts.bootstrap_resamples = bootstrap;
    opts.seed = seed;
    opts.gaussianity_sigmas = gauss_sigmas;
    const auto res = reconstruct(trace, opts);
    json j = result_to_json(res);
    j["bootstrap"] = {{"method", "percentile"}, {"resamples", bootstrap}, {"seed", seed}};
    if (trace.meta.true_state) j["true_state"] = state_json(*trace.meta.true_state);
    emit(j, out);
  }
};

// ---------------------------------------------------------------------------
// oracle

struct OracleCmd {
  StateFlags state;
  bool two_mode{false};
  int dim{0};  // 0 = module default (200 single, 60 per mode)
  bool auto_dim{false};
  std::string grid;  // "", "single" or "two"
  std::string out{"-"};

  void run() const {
    if (!grid.empty()) {
      run_grid();
      return;
    }
    json j;
    j["convention"] = convention_tag;
    if (two_mode) {
      const auto s = state.two_mode();
      const int d = dim > 0 ? dim : 60;
      const auto ts = auto_dim ? fock::build_two_mode_auto(s, d) : fock::build_two_mode(s, d);
      const double oracle = fock::g2_oracle(ts).value;
      const double ref = g2_two_mode(s).value;
      j["mode"] = "two-mode";
      j["state"] = state_json(s);
      j["dim_per_mode"] = ts.mode_dims[0];
      fill_compare(j, ts, oracle, ref, "moment_pipeline");
    } else {
      const auto s = state.single();
      const int d = dim > 0 ? dim : 200;
      const auto ts = auto_dim ? fock::build_single_auto(s, d) : fock::build_single(s, d);
      const double oracle = fock::g2_oracle(ts).value;
      const bool real_alpha = s.alpha.imag() == 0;
      const double ref =
          real_alpha ? g2_single_closed_form(s).value : g2_single_pipeline(s).value;
      j["mode"] = "single";
      j["state"] = state_json(s);
      j["dim"] = ts.mode_dims[0];
      fill_compare(j, ts, oracle, ref, real_alpha ? "closed_form" : "moment_pipeline");
    }
    emit(j, out);
  }

  static void fill_compare(json& j, const fock::TruncatedState& ts, double oracle, double ref,
                           const char* ref_method) {
    j["tail_mass"] = ts.tail_mass;
    j["tail_ok"] = ts.tail_ok;
    j["g2_oracle"] = oracle;
    j["g2_reference"] = ref;
    j["reference_method"] = ref_method;
    j["abs_diff"] = std::abs(oracle - ref);
    j["rel_diff"] = std::abs(oracle - ref) / std::max(std::abs(ref), 1e-300);
  }

  void run_grid() const {
    OutTarget target(out);
    std::ostream& os = target.os();
    if (grid == "single") {
      const int d = dim > 0 ? dim : 200;
      os << "alpha,r,psi,nth,dim,tail_mass,g2_oracle,g2_closed_form,abs_diff,rel_diff\n";
      for (const double r : {0.25, 0.5, 1.0})
        for (const double alpha : {0.0, 1.5, 3.0})
          for (const double psi : {0.0, M_PI})
            for (const double nth : {0.0, 0.3}) {
              const SingleModeStated s({alpha, 0}, SqueezingParamd(r, psi), nth);
              const auto ts = fock::build_single(s, d);
              const double oracle = fock::g2_oracle(ts).value;
              const double ref = g2_single_closed_form(s).value;
              os << format_double(alpha) << ',' << format_double(r) << ','
                 << format_double(psi) << ',' << format_double(nth) << ',' << d << ','
                 << format_double(ts.tail_mass) << ',' << format_double(oracle) << ','
                 << format_double(ref) << ',' << format_double(std::abs(oracle - ref)) << ','
                 << format_double(std::abs(oracle - ref) / std::abs(ref)) << '\n';
            }
    } else if (grid == "two") {
      const int d = dim > 0 ? dim : 60;
      os << "alpha,r,psi,nth,dim_per_mode,tail_mass,g2_oracle,g2_pipeline,abs_diff,rel_diff\n";
      for (const double r : {0.35, 0.7})
        for (const double alpha : {0.0, 1.25, 2.5})
          for (const double nth : {0.0, 0.15}) {
            const TwoModeStated s({alpha, 0}, {alpha, 0}, SqueezingParamd(r, M_PI), nth, nth);
            const auto ts = fock::build_two_mode(s, d);
            const double oracle = fock::g2_oracle(ts).value;
            const double ref = g2_two_mode(s).value;
            os << format_double(alpha) << ',' << format_double(r) << ',' << format_double(M_PI)
               << ',' << format_double(nth) << ',' << d << ',' << format_double(ts.tail_mass)
               << ',' << format_double(oracle) << ',' << format_double(ref) << ','
               << format_double(std::abs(oracle - ref)) << ','
               << format_double(std::abs(oracle - ref) / std::abs(ref)) << '\n';
          }
    } else {
      throw ValidationError("grid must be 'single' or 'two'");
    }
    if (!os) throw ValidationError("write failed on '" + out + "'");
  }
};

void add_config_flag(CLI::App* sub, std::string& path) {
  sub->add_option("--config", path, "JSON config; explicit flags override its values");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"g2(0) of Gaussian states: closed forms, thresholds, homodyne simulation "
               "and estimation, Fock-space oracle"};
  app.require_subcommand(1);
  std::string config_path;  // value consumed by apply_config before parsing

  G2Cmd g2_cmd;
  auto* g2_sub = app.add_subcommand("g2", "compute g2(0) from state parameters");
  add_single_state_flags(g2_sub, g2_cmd.state);
  add_two_mode_state_flags(g2_sub, g2_cmd.state);
  g2_sub->add_flag("--two-mode", g2_cmd.two_mode, "two-mode state (uses beta/nth1/nth2)");
  g2_sub->add_option("--out", g2_cmd.out, "output path, - for stdout");
  add_config_flag(g2_sub, config_path);
  g2_sub->callback([&] { g2_cmd.run(); });

  ThresholdCmd th_cmd;
  auto* th_sub = app.add_subcommand("threshold", "coherent-amplitude threshold alpha_th");
  th_sub->add_option("--r", th_cmd.r, "squeezing amplitude (> 0)")->required();
  th_sub->add_option("--psi", th_cmd.psi, "squeezing phase");
  th_sub->add_option("--nth", th_cmd.nth, "thermal occupation");
  th_sub->add_flag("--two-mode-symmetric", th_cmd.two_mode_symmetric,
                   "symmetric two-mode threshold (alpha = beta, equal occupations)");
  th_sub->add_option("--out", th_cmd.out, "output path, - for stdout");
  add_config_flag(th_sub, config_path);
  th_sub->callback([&] { th_cmd.run(); });

  ScanCmd scan_cmd;
  auto* scan_sub = app.add_subcommand("scan", "grid scan emitting CSV");
  scan_sub->add_option("--mode", scan_cmd.mode, "single or two-mode");
  scan_sub->add_option("--sweep", scan_cmd.sweeps, "axis as name=min:max:steps (repeatable)");
  add_single_state_flags(scan_sub, scan_cmd.fixed);
  add_two_mode_state_flags(scan_sub, scan_cmd.fixed);
  scan_sub->add_option("--out", scan_cmd.out, "output CSV path, - for stdout");
  add_config_flag(scan_sub, config_path);
  scan_sub->callback([&] { scan_cmd.run(); });

  SimulateCmd sim_cmd;
  auto* sim_sub = app.add_subcommand("simulate", "generate a homodyne quadrature trace");
  add_single_state_flags(sim_sub, sim_cmd.state);
  sim_sub->add_option("--seed", sim_cmd.seed, "RNG seed");
  sim_sub->add_option("--samples", sim_cmd.samples, "samples per phase (default schedule)");
  sim_sub->add_option("--phase", sim_cmd.phases,
                      "schedule entry theta:count (repeatable, overrides --samples)");
  sim_sub->add_option("--out", sim_cmd.trace_out, "trace CSV path")->required();
  add_config_flag(sim_sub, config_path);
  sim_sub->callback([&] { sim_cmd.run(); });

  EstimateCmd est_cmd;
  auto* est_sub = app.add_subcommand("estimate", "reconstruct state and g2 from a trace");
  est_sub->add_option("--in", est_cmd.trace_in, "trace CSV path")->required();
  est_sub->add_option("--bootstrap", est_cmd.bootstrap, "bootstrap resamples");
  est_sub->add_option("--seed", est_cmd.seed, "bootstrap seed");
  est_sub->add_option("--gauss-sigmas", est_cmd.gauss_sigmas,
                      "gaussianity threshold in sampling std errors");
  est_sub->add_option("--out", est_cmd.out, "output path, - for stdout");
  add_config_flag(est_sub, config_path);
  est_sub->callback([&] { est_cmd.run(); });

  OracleCmd orc_cmd;
  auto* orc_sub = app.add_subcommand("oracle", "truncated Fock-basis reference check");
  add_single_state_flags(orc_sub, orc_cmd.state);
  add_two_mode_state_flags(orc_sub, orc_cmd.state);
  orc_sub->add_flag("--two-mode", orc_cmd.two_mode, "two-mode state");
  orc_sub->add_option("--dim", orc_cmd.dim, "truncation dimension (0 = default)");
  orc_sub->add_flag("--auto", orc_cmd.auto_dim, "escalate dimension until the tail converges");
  orc_sub->add_option("--grid", orc_cmd.grid, "benchmark comparison grid: single or two");
  orc_sub->add_option("--out", orc_cmd.out, "output path, - for stdout");
  add_config_flag(orc_sub, config_path);
  orc_sub->callback([&] { orc_cmd.run(); });

  try {
    std::vector<std::string> tokens(argv + 1, argv + argc);
    tokens = apply_config(app, std::move(tokens));
    std::reverse(tokens.begin(), tokens.end());
    app.parse(tokens);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
