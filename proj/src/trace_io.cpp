#include "g2cm/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <system_error>

#include "g2cm/states.hpp"

namespace g2cm {

namespace {

double parse_double(const std::string& path, std::size_t line_no, std::string_view field,
                    std::string_view token) {
  double v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
    throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed " +
                          std::string(field) + " value '" + std::string(token) + "'");
  return v;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

PhaseSchedule infer_schedule(const std::vector<double>& theta) {
  PhaseSchedule schedule;
  for (const double t : theta) {
    if (schedule.empty() || schedule.back().theta != t)
      schedule.push_back({t, 1});
    else
      ++schedule.back().n_samples;
  }
  return schedule;
}

}  // namespace

std::string format_double(double v) {
  // Shortest representation that parses back to the same double: grid coordinates stay
  // readable ("0.2") while computed values keep full fidelity.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string method_name(G2Method m) {
  switch (m) {
    case G2Method::closed_form: return "closed_form";
    case G2Method::moment_pipeline: return "moment_pipeline";
    case G2Method::estimated: return "estimated";
    case G2Method::oracle: return "oracle";
  }
  return "unknown";
}

std::string meta_path_for(const std::string& csv_path) { return csv_path + ".meta.json"; }

nlohmann::json meta_to_json(const TraceMeta& meta) {
  nlohmann::json j;
  j["seed"] = meta.seed;
  j["convention"] = meta.convention;
  j["rng"] = meta.rng;
  j["timestamp"] = meta.timestamp;
  j["schedule"] = nlohmann::json::array();
  for (const auto& e : meta.schedule)
    j["schedule"].push_back({{"theta", e.theta}, {"n_samples", e.n_samples}});
  if (meta.true_state) {
    const auto& s = *meta.true_state;
    j["true_state"] = {{"alpha_re", s.alpha.real()}, {"alpha_im", s.alpha.imag()},
                       {"r", s.xi.r},                {"psi", s.xi.psi},
                       {"n_th", s.n_th}};
  }
  if (meta.efficiency) j["efficiency"] = *meta.efficiency;
  return j;
}

TraceMeta meta_from_json(const nlohmann::json& j) {
  TraceMeta meta;
  meta.seed = j.value("seed", std::uint64_t{0});
  meta.convention = j.value("convention", meta.convention);
  meta.rng = j.value("rng", meta.rng);
  meta.timestamp = j.value("timestamp", std::string{});
  if (j.contains("schedule"))
    for (const auto& e : j.at("schedule"))
      meta.schedule.push_back(
          {e.at("theta").get<double>(), e.at("n_samples").get<std::size_t>()});
  if (j.contains("true_state")) {
    const auto& s = j.at("true_state");
    meta.true_state = SingleModeStated(
        {s.at("alpha_re").get<double>(), s.at("alpha_im").get<double>()},
        SqueezingParamd(s.at("r").get<double>(), s.at("psi").get<double>()),
        s.at("n_th").get<double>());
  }
  if (j.contains("efficiency")) meta.efficiency = j.at("efficiency").get<double>();
  return meta;
}

void write_trace(const std::string& csv_path, const HomodyneTrace& trace) {
  if (trace.theta.size() != trace.value.size())
    throw ValidationError("trace theta/value lengths differ");
  std::ofstream out(csv_path);
  if (!out) throw ValidationError("cannot open '" + csv_path + "' for writing");
  out << "theta,value\n";
  for (std::size_t i = 0; i < trace.theta.size(); ++i)
    out << format_double(trace.theta[i]) << ',' << format_double(trace.value[i]) << '\n';
  if (!out) throw ValidationError("write failed on '" + csv_path + "'");
  out.close();

  std::ofstream meta(meta_path_for(csv_path));
  if (!meta) throw ValidationError("cannot open '" + meta_path_for(csv_path) + "' for writing");
  meta << meta_to_json(trace.meta).dump(2) << '\n';
  if (!meta) throw ValidationError("write failed on '" + meta_path_for(csv_path) + "'");
}

HomodyneTrace read_trace(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ValidationError("cannot open '" + csv_path + "'");

  HomodyneTrace trace;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line))
    throw ValidationError(csv_path + ":1: empty file, expected header 'theta,value'");
  ++line_no;
  strip_cr(line);
  if (line != "theta,value")
    throw ValidationError(csv_path + ":1: expected header 'theta,value', got '" + line + "'");

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) {
      if (in.eof()) break;
      throw ValidationError(csv_path + ":" + std::to_string(line_no) + ": blank record");
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError(csv_path + ":" + std::to_string(line_no) +
                            ": expected 'theta,value' record");
    const std::string_view sv(line);
    trace.theta.push_back(parse_double(csv_path, line_no, "theta", sv.substr(0, comma)));
    trace.value.push_back(parse_double(csv_path, line_no, "value", sv.substr(comma + 1)));
  }
  if (trace.theta.empty()) throw ValidationError(csv_path + ": no records");

  std::ifstream meta_in(meta_path_for(csv_path));
  if (meta_in) {
    nlohmann::json j;
    try {
      meta_in >> j;
    } catch (const nlohmann::json::exception& err) {
      throw ValidationError(meta_path_for(csv_path) + ": " + err.what());
    }
    trace.meta = meta_from_json(j);
    std::size_t expected = 0;
    for (const auto& e : trace.meta.schedule) expected += e.n_samples;
    if (!trace.meta.schedule.empty() && expected != trace.theta.size())
      throw ValidationError(csv_path + ": record count " + std::to_string(trace.theta.size()) +
                            " does not match schedule total " + std::to_string(expected));
  } else {
    trace.meta.schedule = infer_schedule(trace.theta);
  }
  return trace;
}

nlohmann::json result_to_json(const ReconstructionResult& res) {
  nlohmann::json j;
  j["convention"] = "vacuum-variance=1/2";
  j["cm"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < res.cm.rows(); ++r)
    for (Eigen::Index c = 0; c < res.cm.cols(); ++c) j["cm"].push_back(res.cm(r, c));
  j["x"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < res.x.size(); ++i) j["x"].push_back(res.x[i]);
  j["cm_physical"] = res.cm_physical;
  if (res.fitted) {
    const auto& s = res.fitted->state;
    j["fitted"] = {{"alpha_re", s.alpha.real()}, {"alpha_im", s.alpha.imag()},
                   {"r", s.xi.r},                {"psi", s.xi.psi},
                   {"n_th", s.n_th},             {"psi_degenerate", res.fitted->psi_degenerate}};
  }
  j["g2"] = {{"value", res.g2.value},
             {"method", method_name(res.g2.method)},
             {"ci_low", res.g2_ci.low},
             {"ci_high", res.g2_ci.high},
             {"std_error", res.g2_ci.std_error}};
  j["gaussianity"] = {{"pass", res.gaussianity.pass},
                      {"sigma_threshold", res.gaussianity.sigma_threshold},
                      {"phases", nlohmann::json::array()}};
  for (const auto& p : res.gaussianity.phases)
    j["gaussianity"]["phases"].push_back({{"theta", p.theta},
                                          {"n", p.n},
                                          {"skewness", p.skewness},
                                          {"excess_kurtosis", p.excess_kurtosis}});
  j["warnings"] = res.warnings;
  return j;
}

}  // namespace g2cm
