#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CONTRACT_LAB_BIN
#error "CONTRACT_LAB_BIN must point at the CLI binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

RunResult run(const std::string& args) {
  const std::string out = "cli_test_stdout.txt";
  const std::string err = "cli_test_stderr.txt";
  const std::string cmd = std::string(CONTRACT_LAB_BIN) + " " + args + " > " + out +
                          " 2> " + err;
  const int raw = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(raw);
  res.stdout_text = slurp(out);
  res.stderr_text = slurp(err);
  std::remove(out.c_str());
  std::remove(err.c_str());
  return res;
}

const char* kUniformConfig = R"({
  "b": 1.0,
  "theta": 0.5,
  "f0": {"family": "uniform", "lo": 0.5, "hi": 1.5},
  "f1": {"family": "uniform", "lo": 0.0, "hi": 1.0}
})";

}  // namespace

TEST_CASE("solve: emits the two-uniform equilibria") {
  spit("cli_uniform.json", kUniformConfig);
  const auto res = run("solve --config cli_uniform.json");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("\"concealed\"") != std::string::npos);
  CHECK(res.stdout_text.find("0.625") != std::string::npos);
  CHECK(res.stdout_text.find("0.2421875") != std::string::npos);
  CHECK(res.stdout_text.find("0.234375") != std::string::npos);
  CHECK(res.stderr_text.find("p0*=0.75") != std::string::npos);
  std::remove("cli_uniform.json");
}

TEST_CASE("solve: invalid theta exits 2 with a named message") {
  spit("cli_bad.json", R"({"b": 1.0, "theta": 1.5,
    "f0": {"family": "exponential", "mean": 0.5},
    "f1": {"family": "exponential", "mean": 0.1}})");
  const auto res = run("solve --config cli_bad.json");
  CHECK(res.exit_code == 2);
  CHECK(res.stderr_text.find("theta must lie in (0,1)") != std::string::npos);
  std::remove("cli_bad.json");
}

TEST_CASE("missing config exits 2; unknown field exits 2") {
  CHECK(run("solve --config does_not_exist.json").exit_code == 2);
  spit("cli_unknown.json", R"({"b": 1.0, "theta": 0.5, "zzz": 1,
    "f0": {"family": "exponential", "mean": 0.5},
    "f1": {"family": "exponential", "mean": 0.1}})");
  CHECK(run("solve --config cli_unknown.json").exit_code == 2);
  std::remove("cli_unknown.json");
}

TEST_CASE("--seedless is reserved and refused") {
  spit("cli_s.json", kUniformConfig);
  const auto res = run("solve --config cli_s.json --seedless");
  CHECK(res.exit_code == 2);
  CHECK(res.stderr_text.find("deterministic") != std::string::npos);
  std::remove("cli_s.json");
}

TEST_CASE("sweep: byte-identical files across reruns, argmax summary on stderr") {
  spit("cli_sweep.json", R"({"b": 1.0, "theta": 0.5,
    "f0": {"family": "exponential", "mean": 0.5},
    "f1": {"family": "exponential", "mean": 0.01},
    "grids": {"eps_n": 21},
    "output": {"format": "csv"}})");
  const auto a = run("sweep garbling --config cli_sweep.json --out cli_sweep_a.csv");
  const auto b = run("sweep garbling --config cli_sweep.json --out cli_sweep_b.csv");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(a.stderr_text.find("interior argmax") != std::string::npos);
  const std::string fa = slurp("cli_sweep_a.csv");
  CHECK(fa == slurp("cli_sweep_b.csv"));
  CHECK(fa.substr(0, 3) == "eps");
  CHECK(fa.find("\r\n") != std::string::npos);
  std::remove("cli_sweep.json");
  std::remove("cli_sweep_a.csv");
  std::remove("cli_sweep_b.csv");
}

TEST_CASE("sweep restriction: boundary argmax for the wide-gap scenario") {
  spit("cli_rest.json", R"({"b": 1.0, "theta": 0.5,
    "f0": {"family": "exponential", "mean": 0.5},
    "f1": {"family": "exponential", "mean": 0.01},
    "grids": {"r_n": 21}})");
  const auto res = run("sweep restriction --config cli_rest.json --format csv --out cli_rest.csv");
  CHECK(res.exit_code == 0);
  CHECK(res.stderr_text.find("boundary argmax") != std::string::npos);
  std::remove("cli_rest.json");
  std::remove("cli_rest.csv");
}

TEST_CASE("grid: requires lambda axes; reports sign changes per row") {
  spit("cli_grid0.json", kUniformConfig);
  CHECK(run("grid revelation --config cli_grid0.json").exit_code == 2);
  std::remove("cli_grid0.json");

  spit("cli_grid.json", R"({"b": 1.0, "theta": 0.5,
    "f0": {"family": "exponential", "mean": 0.5},
    "f1": {"family": "exponential", "mean": 0.01},
    "grids": {"lambda0": {"min": 0.05, "max": 1.0, "n": 6},
              "lambda1": [0.01, 0.3]}})");
  const auto res = run("grid revelation --config cli_grid.json --format csv --out cli_grid.csv");
  CHECK(res.exit_code == 0);
  CHECK(res.stderr_text.find("sign changes") != std::string::npos);
  // lambda1 = 0.01 row must flip sign somewhere along lambda0
  CHECK(res.stderr_text.find("lambda1=0.01 sign changes 1") != std::string::npos);
  std::remove("cli_grid.json");
  std::remove("cli_grid.csv");
}

TEST_CASE("check-conditions exits 0 whatever the verdicts") {
  spit("cli_check.json", R"({"b": 1.0, "theta": 0.5,
    "f0": {"family": "exponential", "mean": 0.2},
    "f1": {"family": "point_mass", "atom": 0.0}})");
  const auto res = run("check-conditions --config cli_check.json");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("prop1_zerocost_concealment") != std::string::npos);
  CHECK(res.stdout_text.find("garbling_zerocost") != std::string::npos);
  CHECK(res.stdout_text.find("not applicable") != std::string::npos);  // mlrp with an atom
  CHECK(res.stdout_text.find("schema_version") != std::string::npos);
  std::remove("cli_check.json");
}

TEST_CASE("shipped example configs parse and solve") {
  const auto res = run("solve --config " CONTRACT_LAB_CONFIG_DIR "/uniform-mixture.json");
  CHECK(res.exit_code == 0);
  const auto res2 =
      run("check-conditions --config " CONTRACT_LAB_CONFIG_DIR "/anchored-exponential.json");
  CHECK(res2.exit_code == 0);
}
