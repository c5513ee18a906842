#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "plandis/errors.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(PLANDIS_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    res.out.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  res.exit_code = WEXITSTATUS(status);
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("beta subcommand prints the root and its residual") {
  const RunResult res = run("beta --p 2 --d 2");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("0.2928932") != std::string::npos);
  CHECK(res.out.find("|f(beta)|") != std::string::npos);
}

TEST_CASE("green subcommand emits the closed-form tree values") {
  const RunResult res = run("green --tree --d 2 --p 2 --alpha 0 --R 16");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("radius,G") != std::string::npos);
  // G(k) = 2^{-k}
  CHECK(res.out.find("\n0,1\n") != std::string::npos);
  CHECK(res.out.find("\n4,0.0625\n") != std::string::npos);
  CHECK(res.out.find("\n10,0.0009765625\n") != std::string::npos);
}

TEST_CASE("landis tree reports the expected verdicts") {
  const RunResult forces = run("landis tree --p 2 --d 3 --u \"d^(-2|x|)\" --R 30");
  CHECK(forces.exit_code == 0);
  CHECK(forces.out.find("\"verdict\": \"FORCES_ZERO\"") != std::string::npos);

  const RunResult flat = run("landis tree --p 2 --d 3 --u \"beta^|x|\" --R 30");
  CHECK(flat.exit_code == 0);
  CHECK(flat.out.find("\"verdict\": \"NOT_TRIGGERED\"") != std::string::npos);
}

TEST_CASE("exit codes map the error families") {
  // p <= 1 is a precondition error
  CHECK(run("beta --p 1 --d 2").exit_code == 2);
  // missing file is a parse/precondition error
  CHECK(run("graph validate --in /nonexistent/g.json").exit_code == 2);
  // unsolvable divergent exhaustion signals convergence failure
  const RunResult div =
      run("green --spec /tmp/plandis_cli_path_spec.json --p 2 --alpha 0 --R 64 "
          "--schedule 4 --schedule 8 --schedule 16 --schedule 32 --schedule 64");
  CHECK(div.exit_code == 3);
}

TEST_CASE("scenario determinism: identical runs produce identical artifacts") {
  const std::string scenario = R"json([
    {"task": "landis-tree", "p": 2.0, "d": 3, "u": "d^(-2|x|)", "R": 30,
     "out": "/tmp/plandis_cli_a.json", "csv": "/tmp/plandis_cli_a.csv"},
    {"task": "beta", "p": 2.7, "d": 4, "out": "/tmp/plandis_cli_b.json"},
    {"task": "energy-probe", "spec": "/tmp/plandis_cli_tree_spec.json", "p": 2.0,
     "hardy": true, "samples": 100, "seed": 42, "support-radius": 5,
     "out": "/tmp/plandis_cli_c.json"}
  ])json";
  std::ofstream("/tmp/plandis_cli_scen.json") << scenario;
  std::ofstream("/tmp/plandis_cli_tree_spec.json") << R"({"kind": "tree", "d": 2, "R": 9})";

  const RunResult first = run("batch --scenarios /tmp/plandis_cli_scen.json");
  REQUIRE(first.exit_code == 0);
  const std::string a1 = slurp("/tmp/plandis_cli_a.json");
  const std::string a1csv = slurp("/tmp/plandis_cli_a.csv");
  const std::string b1 = slurp("/tmp/plandis_cli_b.json");
  const std::string c1 = slurp("/tmp/plandis_cli_c.json");

  const RunResult second = run("batch --scenarios /tmp/plandis_cli_scen.json");
  REQUIRE(second.exit_code == 0);
  CHECK(slurp("/tmp/plandis_cli_a.json") == a1);
  CHECK(slurp("/tmp/plandis_cli_a.csv") == a1csv);
  CHECK(slurp("/tmp/plandis_cli_b.json") == b1);
  CHECK(slurp("/tmp/plandis_cli_c.json") == c1);

  // artifacts embed the resolved configuration
  CHECK(a1.find("\"task\": \"landis-tree\"") != std::string::npos);
  CHECK(a1.find("\"R\": 30") != std::string::npos);
  CHECK(c1.find("\"seed\": 42") != std::string::npos);
}

TEST_CASE("model build and graph round trip through the CLI") {
  std::ofstream("/tmp/plandis_cli_at_spec.json") << R"({"kind": "antitree", "gamma": 1.0, "R": 3})";
  const RunResult build =
      run("model build --spec /tmp/plandis_cli_at_spec.json --out /tmp/plandis_cli_at.json");
  REQUIRE(build.exit_code == 0);
  const RunResult validate = run("graph validate --in /tmp/plandis_cli_at.json");
  CHECK(validate.exit_code == 0);
  CHECK(validate.out.find("\"vertices\": 5") != std::string::npos);

  const RunResult canon =
      run("graph build --in /tmp/plandis_cli_at.json --out /tmp/plandis_cli_at2.json");
  REQUIRE(canon.exit_code == 0);
  CHECK(slurp("/tmp/plandis_cli_at2.json") == slurp("/tmp/plandis_cli_at.json"));
}

TEST_CASE("solve subcommand solves a model ball") {
  std::ofstream("/tmp/plandis_cli_solve_spec.json") << R"({"kind": "tree", "d": 2, "R": 5})";
  const RunResult res =
      run("solve --spec /tmp/plandis_cli_solve_spec.json --p 2.5 --V 0 "
          "--boundary-const 2.0 --out /tmp/plandis_cli_sol.json");
  REQUIRE(res.exit_code == 0);
  const std::string sol = slurp("/tmp/plandis_cli_sol.json");
  // constants are p-harmonic: every value is 2.0
  CHECK(sol.find("\"values\"") != std::string::npos);
  CHECK(sol.find("2.0") != std::string::npos);
}
