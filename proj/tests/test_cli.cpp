#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <string>

#include "npent/state.hpp"

using json = nlohmann::json;
using namespace npent;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

// Run the CLI binary, capturing stdout; stderr is left on the console.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(NPENT_CLI_BIN) + " " + args;
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string write_state(const std::string& name, const StateVector& s) {
  const std::string path = "/tmp/npent_cli_" + name + ".json";
  std::ofstream(path) << state_to_json(s);
  return path;
}

}  // namespace

TEST_CASE("tanglemeter of GHZ emits the single trilinear coefficient") {
  StateVector ghz({2, 2, 2});
  ghz.amps[0] = ghz.amps[7] = 1.0 / std::sqrt(2.0);
  const std::string path = write_state("ghz3", ghz);
  const RunResult r = run_cli("tanglemeter " + path);
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["group"] == "su");
  REQUIRE(j["beta"].size() == 1);
  CHECK(j["beta"]["7"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["beta"]["7"][1].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("classify names the four-qubit W state") {
  StateVector w({2, 2, 2, 2});
  for (uint64_t m : {1, 2, 4, 8}) w.amps[m] = 0.5;
  const RunResult r = run_cli("classify " + write_state("w4", w));
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["class"] == "W");
}

TEST_CASE("exit codes: usage 1, missing file 1, domain error 2") {
  CHECK(run_cli("no-such-command 2>/dev/null").status == 1);
  CHECK(run_cli("tanglemeter /tmp/npent_cli_missing.json 2>/dev/null").status ==
        1);
  CHECK(run_cli("sample-figpoly --n 2 2>/dev/null").status == 1);
  // GHZ has vanishing bilinear amplitudes: outside the filter's orbit.
  StateVector ghz({2, 2, 2});
  ghz.amps[0] = ghz.amps[7] = 1.0 / std::sqrt(2.0);
  const std::string path = write_state("ghz3", ghz);
  CHECK(run_cli("ghz-filter " + path + " 2>/dev/null").status == 2);
}

TEST_CASE("sample-figpoly output is identical across job counts") {
  const RunResult a = run_cli("sample-figpoly --n 8 --seed 11 --jobs 1");
  const RunResult b = run_cli("sample-figpoly --n 8 --seed 11 --jobs 4");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  CHECK(a.out == b.out);
  int lines = 0;
  for (char c : a.out) lines += c == '\n';
  CHECK(lines == 9);  // header + 8 rows
}

TEST_CASE("merge regroups elements and preserves amplitudes") {
  StateVector ghz({2, 2, 2});
  ghz.amps[0] = ghz.amps[7] = 1.0 / std::sqrt(2.0);
  const RunResult r =
      run_cli("merge " + write_state("ghz3", ghz) + " --groups '0,1;2'");
  REQUIRE(r.status == 0);
  const StateVector m = state_from_json(r.out);
  REQUIRE(m.dims == std::vector<uint32_t>{4, 2});
  CHECK(std::abs(m.amps[0] - ghz.amps[0]) < 1e-15);
  CHECK(std::abs(m.amps[7] - ghz.amps[7]) < 1e-15);
}

TEST_CASE("graph emits DOT with the GHZ triangle") {
  StateVector ghz({2, 2, 2});
  ghz.amps[0] = ghz.amps[7] = 1.0 / std::sqrt(2.0);
  const RunResult r =
      run_cli("graph " + write_state("ghz3", ghz) + " --format dot");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("triangle") != std::string::npos);
}

TEST_CASE("genfun reports vacuum-scaled level amplitudes") {
  StateVector s({3});
  s.amps = {0.8, 0.0, 0.6};
  const RunResult r = run_cli("genfun " + write_state("qt1", s));
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  // Coefficient of x^2 is (a2/a0)/2!.
  CHECK(j["F"]["2"][0].get<double>() == doctest::Approx(0.375).epsilon(1e-12));
}
