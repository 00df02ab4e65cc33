#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "smartsize/cli.hpp"
#include "smartsize/smartsize.hpp"

using namespace smartsize;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp_dir() {
  const char* env = std::getenv("SMARTSIZE_TEST_TMP");
  fs::path dir = env ? fs::path(env) : fs::temp_directory_path();
  dir /= "cli_test_files";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Value of "key=value" in command output.
std::string value_of(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

fs::path pilot_file() {
  const auto path = tmp_dir() / "pilot.csv";
  RandomStream rng(5);
  const auto data = gen_trial(builtin_scenario(1), 66, 0.0, rng);
  std::ofstream out(path, std::ios::binary);
  write_pilot_csv(out, data);
  return path;
}

}  // namespace

TEST_CASE("freq-size") {
  const auto r = run({"freq-size", "--delta", "0.2", "--p", "0.4", "--alpha", "0.05", "--beta", "0.2"});
  CHECK(r.code == 0);
  CHECK(r.out == "n=990\n");
  CHECK(r.err.empty());
}

TEST_CASE("freq-power") {
  const auto r = run({"freq-power", "--n", "302", "--delta", "0.41256", "--p", "0.5", "--beta", "0.1"});
  CHECK(r.code == 0);
  CHECK(std::stod(value_of(r.out, "power")) >= 0.9);
}

TEST_CASE("pilot-size") {
  const auto r = run({"pilot-size", "--pa", "0.5", "--pb", "0.5", "--min-cell", "6", "--confidence", "0.9"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n=66\n", 0) == 0);
  CHECK(run({"pilot-size", "--pa", "0.7", "--pb", "0.7"}).out.rfind("n=114\n", 0) == 0);

  const auto m = run({"pilot-size", "--allocation", "multinomial", "--reps", "20000", "--seed", "1"});
  CHECK(m.code == 0);
  CHECK(std::stol(value_of(m.out, "n")) > 66);
}

TEST_CASE("randomized commands require a seed") {
  const auto r = run({"pilot-size", "--allocation", "multinomial"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error: --seed is required", 0) == 0);
  CHECK(run({"simulate-freq", "--reps", "5"}).code == 1);
}

TEST_CASE("usage errors exit with status 1 and a single error line") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"no-such-command"}, {}, {"freq-size", "--delta"}, {"freq-size", "--bogus", "1"}, {"freq-size", "--p", "0.4"}}) {
    const auto r = run(args);
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(r.err.find('\n') == r.err.size() - 1);
  }
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("domain errors exit with status 2") {
  const auto r = run({"freq-size", "--delta", "-1", "--p", "0.4"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ", 0) == 0);
  const auto inf = run({"bayes-size", "--tau2", "143.5", "--theta-d", "2", "--sigma-d", "2", "--target", "0.9"});
  CHECK(inf.code == 2);
  CHECK(inf.err.find("ceiling") != std::string::npos);
}

TEST_CASE("bayes-size with a missing pilot file") {
  const auto r = run({"bayes-size", "--pilot", "/nonexistent/pilot.csv", "--theta-d", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: pilot file not found", 0) == 0);
}

TEST_CASE("bayes-size with a known tau2") {
  const auto r = run({"bayes-size", "--tau2", "143.5", "--theta-d", "2", "--sigma0", "100", "--eps", "0.05", "--target", "0.9"});
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "n") == "308");
  CHECK(run({"bayes-size", "--theta-d", "2"}).code == 1);
  CHECK(run({"bayes-size", "--tau2", "1"}).code == 1);
}

TEST_CASE("analyze-pilot and bayes-size from pilot data") {
  const auto path = pilot_file();
  const auto a = run({"analyze-pilot", "--pilot", path.string()});
  REQUIRE(a.code == 0);
  CHECK(value_of(a.out, "n") == "66");
  CHECK(value_of(a.out, "nu_n") == "71");

  const auto data = read_pilot_csv(path);
  const auto ce = contrast_estimate(data, first_compared_strategy(), second_compared_strategy());
  CHECK(std::stod(value_of(a.out, "theta_hat")) == ce.theta_hat);

  const auto b = run({"bayes-size", "--pilot", path.string(), "--theta-d", "2", "--target", "0.9"});
  REQUIRE(b.code == 0);
  const auto post = nix_posterior({}, ce.theta_hat, ce.tau2_hat, 66);
  const auto expect = bayes_sample_size(0.9, {0.0, 100.0}, {2.0, 0.0}, 0.05, post);
  CHECK(value_of(b.out, "n") == std::to_string(expect.n));

  write_file(tmp_dir() / "bad.csv", "id,a1,r,a2,y\n1,A,1,C,3\n");
  const auto bad = run({"analyze-pilot", "--pilot", (tmp_dir() / "bad.csv").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("config file values and flag overrides") {
  const auto cfg = tmp_dir() / "freq.ini";
  write_file(cfg, "[frequentist]\ndelta = 0.2\np = 0.4\nbeta = 0.2\n");
  CHECK(run({"freq-size", "--config", cfg.string()}).out == "n=990\n");
  CHECK(run({"freq-size", "--config", cfg.string(), "--delta", "0.5"}).out == "n=160\n");

  const auto unknown = tmp_dir() / "unknown.ini";
  write_file(unknown, "[frequentist]\ndelta = 0.2\ncolour = blue\n");
  const auto u = run({"freq-size", "--config", unknown.string()});
  CHECK(u.code == 1);
  CHECK(u.err.find("unknown key 'frequentist.colour'") != std::string::npos);

  const auto bad = tmp_dir() / "bad.ini";
  write_file(bad, "[frequentist]\ndelta = abc\np = 0.4\n");
  CHECK(run({"freq-size", "--config", bad.string()}).code == 1);
  write_file(bad, "[frequentist\ndelta = 0.2\n");
  CHECK(run({"freq-size", "--config", bad.string()}).code == 1);
  CHECK(run({"freq-size", "--config", (tmp_dir() / "missing.ini").string()}).code == 1);

  const auto sim = tmp_dir() / "sim.ini";
  write_file(sim, "[run]\nseed = 3\n[frequentist]\ndelta_bias = 0,0.25\n[simulation]\nreps = 20\n");
  const auto s = run({"simulate-freq", "--config", sim.string(), "--threads", "1"});
  CHECK(s.code == 0);
  CHECK(s.out.find("1,0.25,0,194,") != std::string::npos);
}

TEST_CASE("identical arguments give byte-identical outputs") {
  const auto dir = tmp_dir();
  const auto out1 = dir / "freq1.csv";
  const auto out2 = dir / "freq2.csv";
  const std::vector<std::string> base = {"simulate-freq", "--scenario", "1", "--delta-bias", "0,0.25",
                                         "--response-sd", "0,0.05", "--reps", "30", "--seed", "11"};
  auto a1 = base;
  a1.insert(a1.end(), {"--out", out1.string(), "--threads", "1"});
  auto a2 = base;
  a2.insert(a2.end(), {"--out", out2.string(), "--threads", "3"});
  REQUIRE(run(a1).code == 0);
  REQUIRE(run(a2).code == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK_FALSE(slurp(out1).empty());

  const std::vector<std::string> sim = {"simulate-power", "--scenario", "1", "--reps", "6", "--seed", "4",
                                        "--pilot-reps", "4000", "--sigma-d", "0,0.5"};
  auto p1 = sim;
  p1.insert(p1.end(), {"--out", (dir / "p1.json").string(), "--format", "json", "--threads", "1"});
  auto p2 = sim;
  p2.insert(p2.end(), {"--out", (dir / "p2.json").string(), "--format", "json", "--threads", "2"});
  REQUIRE(run(p1).code == 0);
  REQUIRE(run(p2).code == 0);
  CHECK(slurp(dir / "p1.json") == slurp(dir / "p2.json"));

  // CSV and JSON of the same study parse back to the same reports.
  auto p3 = sim;
  p3.insert(p3.end(), {"--out", (dir / "p3.csv").string()});
  REQUIRE(run(p3).code == 0);
  std::ifstream csv(dir / "p3.csv");
  std::ifstream json(dir / "p1.json");
  const auto from_csv = read_reports_csv(csv);
  const auto from_json = read_reports_json(json);
  REQUIRE(from_csv.size() == 2);
  CHECK(from_csv == from_json);
}

TEST_CASE("simulate-type1 and power-curve") {
  const auto t = run({"simulate-type1", "--scenario", "3", "--reps", "6", "--seed", "2", "--pilot-reps", "4000",
                      "--theta0-policy", "pilot", "--threads", "1"});
  REQUIRE(t.code == 0);
  std::istringstream in(t.out);
  const auto reports = read_reports_csv(in);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].type1.has_value());
  CHECK(reports[0].theta0_policy == "pilot");

  const auto c = run({"power-curve", "--tau2", "143.5", "--theta-d", "2", "--grid", "100:400:100"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("n,power\n100,", 0) == 0);
  CHECK(c.out.find("\n400,") != std::string::npos);
  const auto j = run({"power-curve", "--tau2", "143.5", "--theta-d", "2", "--grid", "308", "--format", "json"});
  CHECK(j.code == 0);
  CHECK(j.out.find("\"n\": 308") != std::string::npos);
  CHECK(run({"power-curve", "--tau2", "143.5", "--theta-d", "2", "--grid", "5:1:1"}).code == 1);
}

TEST_CASE("SMARTSIZE_THREADS fallback is validated") {
  ::setenv("SMARTSIZE_THREADS", "zero", 1);
  const auto r = run({"simulate-freq", "--reps", "5", "--seed", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("SMARTSIZE_THREADS") != std::string::npos);
  ::setenv("SMARTSIZE_THREADS", "2", 1);
  CHECK(run({"simulate-freq", "--reps", "5", "--seed", "1"}).code == 0);
  ::unsetenv("SMARTSIZE_THREADS");
}
