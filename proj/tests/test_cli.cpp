#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code{-1};
  std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(G2CM_CLI_PATH) + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

json parse_json(const std::string& text) {
  return json::parse(text);
}

fs::path temp_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("g2cm_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("g2 --help").exit_code == 0);
}

TEST_CASE("missing subcommand or unknown flag is a usage error") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("g2 --no-such-flag 1").exit_code == 2);
}

TEST_CASE("g2 of a coherent state") {
  const auto res = run_cli("g2 --alpha 1");
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(res.output);
  CHECK(j.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.at("closed_form").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(j.at("difference").get<double>()) < 1e-12);
  CHECK(j.at("mode") == "single");
  CHECK(j.at("convention") == "vacuum-variance=1/2");
}

TEST_CASE("g2 accepts pi-fraction angles") {
  const auto res = run_cli("g2 --alpha 2 --r 0.5 --psi pi --nth 0.14");
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(res.output);
  CHECK(j.at("value").get<double>() == doctest::Approx(0.93479918450242516).epsilon(1e-11));
  CHECK(run_cli("g2 --alpha 2 --r 0.5 --psi -pi/4").exit_code == 0);
  CHECK(run_cli("g2 --alpha 2 --r 0.5 --psi 3pi/4").exit_code == 0);
}

TEST_CASE("complex displacement drops the closed form") {
  const auto res = run_cli("g2 --alpha 1 --alpha-im 0.5 --r 0.3 --psi pi/2");
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(res.output);
  CHECK_FALSE(j.contains("closed_form"));
  CHECK(j.at("value") == j.at("pipeline"));
}

TEST_CASE("two-mode g2") {
  const auto res = run_cli("g2 --two-mode --alpha 2 --beta 2 --r 0.2 --psi pi");
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(res.output);
  CHECK(j.at("value").get<double>() == doctest::Approx(0.96095484126414243).epsilon(1e-10));
  CHECK(j.at("mode") == "two-mode");
}

TEST_CASE("vacuum g2 is a domain error") {
  const auto res = run_cli("g2 --alpha 0");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("error:") != std::string::npos);
}

TEST_CASE("malformed angle is a usage error") {
  const auto res = run_cli("g2 --alpha 1 --psi pi/x");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("angle") != std::string::npos);
}

TEST_CASE("threshold report") {
  const auto res = run_cli("threshold --r 0.5 --nth 0.14");
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(res.output);
  CHECK(j.at("exists").get<bool>());
  CHECK(j.at("alpha_th").get<double>() == doctest::Approx(1.2322464530619133).epsilon(1e-12));
  CHECK(j.at("alpha_min").get<double>() == doctest::Approx(1.8773476631804475).epsilon(1e-12));
  CHECK(j.at("nonclassical_depth").get<double>() ==
        doctest::Approx(1 - 1.28 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(j.at("denominator") == j.at("nonclassical_depth"));

  const auto none = parse_json(run_cli("threshold --r 0.05 --nth 0.5").output);
  CHECK_FALSE(none.at("exists").get<bool>());
  CHECK(none.at("alpha_th").is_null());

  const auto tm = parse_json(run_cli("threshold --r 0.2 --two-mode-symmetric").output);
  CHECK(tm.at("alpha_th").get<double>() == doctest::Approx(0.36458815546030121).epsilon(1e-11));

  CHECK(run_cli("threshold --nth 0.1").exit_code == 2);  // --r is required
  CHECK(run_cli("threshold --r 0").exit_code == 2);
}

TEST_CASE("scan produces a full cartesian grid") {
  const auto res = run_cli("scan --sweep alpha=0.5:2:4 --sweep r=0.2:0.4:2 --psi pi");
  REQUIRE(res.exit_code == 0);
  CHECK(count_lines(res.output) == 9);  // header + 4 * 2 rows
  std::istringstream lines(res.output);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "alpha,r,psi,nth,g2_closed_form,g2_pipeline,alpha_th,alpha_min,threshold_denominator,"
        "nonclassical_depth");
  // Last axis varies fastest: first two rows share alpha = 0.5.
  std::string row;
  std::getline(lines, row);
  CHECK(row.substr(0, 8) == "0.5,0.2,");
  std::getline(lines, row);
  CHECK(row.substr(0, 8) == "0.5,0.4,");
}

TEST_CASE("scan leaves undefined cells empty instead of failing") {
  // With r = 0 the alpha = 0 row is the vacuum (no g2) and thresholds are undefined at
  // every alpha; the rows must still appear, with empty value cells.
  const auto res = run_cli("scan --sweep alpha=0:1:2 --r 0 --psi pi");
  REQUIRE(res.exit_code == 0);
  CHECK(count_lines(res.output) == 3);
  std::istringstream lines(res.output);
  std::string header, row0;
  std::getline(lines, header);
  std::getline(lines, row0);
  CHECK(row0.find(",,") != std::string::npos);
}

TEST_CASE("scan validates axes") {
  CHECK(run_cli("scan --sweep beta=0:1:2").exit_code == 2);  // not a single-mode axis
  CHECK(run_cli("scan --sweep alpha=0:1:2 --sweep alpha=0:1:2").exit_code == 2);
  CHECK(run_cli("scan --sweep alpha=1:0:2").exit_code == 2);  // min >= max
  CHECK(run_cli("scan --mode both --sweep alpha=0:1:2").exit_code == 2);
  CHECK(run_cli("scan").exit_code == 2);
}

TEST_CASE("two-mode scan") {
  const auto res = run_cli(
      "scan --mode two-mode --sweep alpha=0.5:1.5:3 --beta 1 --r 0.2 --psi pi --nth1 0 --nth2 0");
  REQUIRE(res.exit_code == 0);
  CHECK(count_lines(res.output) == 4);
  std::istringstream lines(res.output);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "alpha,beta,r,psi,nth1,nth2,g2");
}

TEST_CASE("simulate writes a deterministic trace with sidecar metadata") {
  const auto dir = temp_dir();
  const auto trace_a = (dir / "trace_a.csv").string();
  const auto trace_b = (dir / "trace_b.csv").string();

  const auto res = run_cli("simulate --alpha 2 --samples 500 --seed 77 --out " + trace_a);
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(res.output);
  CHECK(j.at("records").get<int>() == 2000);
  CHECK(j.at("seed").get<int>() == 77);
  CHECK(fs::exists(trace_a));
  CHECK(fs::exists(trace_a + ".meta.json"));

  REQUIRE(run_cli("simulate --alpha 2 --samples 500 --seed 77 --out " + trace_b).exit_code == 0);
  CHECK(slurp(trace_a) == slurp(trace_b));  // byte-identical CSV for equal seeds

  const auto meta = parse_json(slurp(trace_a + ".meta.json"));
  CHECK(meta.at("seed").get<int>() == 77);
  CHECK(meta.at("schedule").size() == 4);
  CHECK(meta.at("true_state").at("alpha_re").get<double>() == 2.0);
}

TEST_CASE("simulate accepts a custom phase schedule") {
  const auto dir = temp_dir();
  const auto path = (dir / "custom.csv").string();
  const auto res =
      run_cli("simulate --alpha 1 --phase 0:200 --phase pi/2:200 --seed 5 --out " + path);
  REQUIRE(res.exit_code == 0);
  CHECK(parse_json(res.output).at("records").get<int>() == 400);
  CHECK(run_cli("simulate --alpha 1 --phase 0:0 --out " + path).exit_code == 2);
  CHECK(run_cli("simulate --alpha 1 --phase nonsense --out " + path).exit_code == 2);
}

TEST_CASE("estimate round-trips a simulated coherent trace") {
  const auto dir = temp_dir();
  const auto path = (dir / "roundtrip.csv").string();
  REQUIRE(run_cli("simulate --alpha 2 --samples 5000 --seed 2024 --out " + path).exit_code == 0);

  const auto res = run_cli("estimate --in " + path + " --bootstrap 200 --seed 3");
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(res.output);
  const double value = j.at("g2").at("value").get<double>();
  const double se = j.at("g2").at("std_error").get<double>();
  CHECK(std::abs(value - 1.0) < 6 * se);
  CHECK(j.at("g2").at("ci_low").get<double>() < j.at("g2").at("ci_high").get<double>());
  CHECK(j.at("g2").at("method") == "estimated");
  CHECK(j.at("gaussianity").at("pass").get<bool>());
  CHECK(j.at("bootstrap").at("resamples").get<int>() == 200);
  CHECK(j.at("true_state").at("alpha_re").get<double>() == 2.0);
  CHECK(j.at("cm").size() == 4);

  // Same input and seed give byte-identical output.
  const auto again = run_cli("estimate --in " + path + " --bootstrap 200 --seed 3");
  CHECK(res.output == again.output);

  // Under 100 resamples the percentile interval is too coarse to report.
  CHECK(run_cli("estimate --in " + path + " --bootstrap 10").exit_code == 2);
}

TEST_CASE("estimate reports malformed traces with file and line") {
  const auto dir = temp_dir();
  const auto path = (dir / "broken.csv").string();
  {
    std::ofstream out(path);
    out << "theta,value\n0,1.25\n0,not-a-number\n";
  }
  const auto res = run_cli("estimate --in " + path);
  CHECK(res.exit_code == 2);
  CHECK(res.output.find(path + ":3") != std::string::npos);

  CHECK(run_cli("estimate --in " + (dir / "missing.csv").string()).exit_code == 2);
}

TEST_CASE("config file supplies defaults and explicit flags win") {
  const auto dir = temp_dir();
  const auto flat = dir / "flat.json";
  {
    std::ofstream out(flat);
    out << R"({"alpha": 1.0, "unrelated_key": {"ignored": true}})";
  }
  const auto res = run_cli("g2 --config " + flat.string());
  REQUIRE(res.exit_code == 0);
  CHECK(parse_json(res.output).at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  const auto sectioned = dir / "sectioned.json";
  {
    std::ofstream out(sectioned);
    out << R"({"g2": {"alpha": 2.0, "r": 0.5, "psi": "pi", "nth": 0.14}})";
  }
  const auto sec = run_cli("g2 --config " + sectioned.string());
  REQUIRE(sec.exit_code == 0);
  CHECK(parse_json(sec.output).at("value").get<double>() ==
        doctest::Approx(0.93479918450242516).epsilon(1e-11));

  // Command line overrides the config value.
  const auto overridden = run_cli("g2 --config " + sectioned.string() + " --alpha 1 --r 0 --nth 0");
  REQUIRE(overridden.exit_code == 0);
  CHECK(parse_json(overridden.output).at("value").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Unknown keys inside the subcommand section are rejected.
  const auto bad = dir / "bad.json";
  {
    std::ofstream out(bad);
    out << R"({"g2": {"not_a_flag": 1}})";
  }
  CHECK(run_cli("g2 --config " + bad.string()).exit_code == 2);
  CHECK(run_cli("g2 --config " + (dir / "nope.json").string()).exit_code == 2);
}

TEST_CASE("oracle cross-check on a cheap state") {
  const auto res = run_cli("oracle --alpha 1 --r 0.3 --psi pi --dim 60");
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(res.output);
  CHECK(j.at("tail_ok").get<bool>());
  CHECK(j.at("rel_diff").get<double>() < 1e-8);
  CHECK(j.at("reference_method") == "closed_form");
  CHECK(j.at("dim").get<int>() == 60);
}

TEST_CASE("oracle comparison grid") {
  const auto res = run_cli("oracle --grid single");
  REQUIRE(res.exit_code == 0);
  CHECK(count_lines(res.output) == 37);  // header + 3 r * 3 alpha * 2 psi * 2 nth
  std::istringstream lines(res.output);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "alpha,r,psi,nth,dim,tail_mass,g2_oracle,g2_closed_form,abs_diff,rel_diff");
  std::string row;
  double worst = 0;
  while (std::getline(lines, row)) {
    const auto last_comma = row.rfind(',');
    REQUIRE(last_comma != std::string::npos);
    worst = std::max(worst, std::stod(row.substr(last_comma + 1)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("outputs can be redirected to files") {
  const auto dir = temp_dir();
  const auto path = (dir / "g2.json").string();
  const auto res = run_cli("g2 --alpha 1.5 --out " + path);
  REQUIRE(res.exit_code == 0);
  const auto j = parse_json(slurp(path));
  CHECK(j.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}
