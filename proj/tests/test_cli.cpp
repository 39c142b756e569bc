#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef COHCAT_CLI_PATH
#error "COHCAT_CLI_PATH must point at the cohcat executable"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string capture = "cli_test_stdout.txt";
  const std::string cmd = env + " \"" COHCAT_CLI_PATH "\" " + args + " > " + capture + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(capture.c_str());
  return r;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("catalysis-demo with an exact target") {
  const Run r = run("catalysis-demo --d 2 --n 3 --seed 7 --epsilon 0");
  REQUIRE(r.code == 0);
  std::stringstream ss(r.out);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  CHECK(header == "trial,n,d,eps_in,dist_out,ratio,cr_in,cr_out,cf_in,cf_out,pass");
  const auto cells = split(row);
  REQUIRE(cells.size() == 11);
  CHECK(std::stod(cells[4]) <= 1e-10);
  CHECK(cells[10] == "true");
}

TEST_CASE("monotonicity-sweep with 1000 trials has no violations") {
  const Run r = run("monotonicity-sweep --trials 1000 --seed 1 --format json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["violations"] == 0);
  CHECK(j["summary"]["rejected"] == 0);
  CHECK(j["rows"].size() == 1000);
}

TEST_CASE("rates on an incoherent state are all zero") {
  write("cli_incoherent.json", R"({"layout": [["S", 3, "S"]], "matrix": [[0.2,0],[0,0],[0,0],[0,0],[0.3,0],[0,0],[0,0],[0,0],[0.5,0]]})");
  const Run r = run("rates --state-file cli_incoherent.json");
  std::remove("cli_incoherent.json");
  REQUIRE(r.code == 0);
  std::stringstream ss(r.out);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "measure,value,certified");
  int rows = 0;
  while (std::getline(ss, line)) {
    CHECK(split(line)[1] == "0");
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("rates on a bipartite state reports per-party values") {
  write("cli_bell.json",
        R"({"layout": [["A", 2, "A"], ["B", 2, "B"]], "amplitudes": [[0.7071067811865476,0],[0,0],[0,0],[0.7071067811865476,0]]})");
  const Run r = run("rates --state-file cli_bell.json --format json");
  std::remove("cli_bell.json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"].size() == 6);
  CHECK(j["rows"][0]["value"].get<double>() == doctest::Approx(1.0));
  CHECK(j["rows"][5]["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run("").code == 1);
  CHECK(run("nonsense").code == 1);
  CHECK(run("catalysis-demo --d 1").code == 1);
  CHECK(run("catalysis-demo --n 7").code == 1);
  CHECK(run("catalysis-demo --n 1").code == 1);
  CHECK(run("monotonicity-sweep --trials 0").code == 1);
  CHECK(run("catalysis-demo --epsilon -0.1").code == 1);
  CHECK(run("catalysis-demo --format xml").code == 1);
  CHECK(run("catalysis-demo --bogus 3").code == 1);
  CHECK(run("catalysis-demo --d two").code == 1);
  CHECK(run("rates --state-file missing.json").code == 1);
  CHECK(run("iqsm --config missing.json").code == 1);
  CHECK(run("iqsm", "COHCAT_SEED=abc").code == 1);
}

TEST_CASE("config file, flag precedence and seed fallback") {
  write("cli_config.json", R"({"trials": 3, "seed": 5, "d": 3, "format": "json"})");
  const Run from_config = run("iqsm --config cli_config.json");
  REQUIRE(from_config.code == 0);
  const auto j = nlohmann::json::parse(from_config.out);
  CHECK(j["config"]["trials"] == 3);
  CHECK(j["config"]["seed"] == 5);
  CHECK(j["config"]["d"] == 3);
  CHECK(j["rows"].size() == 3);

  const Run flagged = run("iqsm --config cli_config.json --seed 9 --trials 2");
  const auto k = nlohmann::json::parse(flagged.out);
  CHECK(k["config"]["seed"] == 9);
  CHECK(k["rows"].size() == 2);

  // Config seed beats the environment; the environment beats the default.
  CHECK(run("iqsm --config cli_config.json", "COHCAT_SEED=11").out == from_config.out);
  write("cli_config2.json", R"({"trials": 3, "d": 3, "format": "json"})");
  CHECK(run("iqsm --config cli_config2.json", "COHCAT_SEED=5").out == from_config.out);
  CHECK(run("iqsm --config cli_config2.json").out != from_config.out);
  std::remove("cli_config.json");
  std::remove("cli_config2.json");
}

TEST_CASE("--out writes the report to a file") {
  const Run r = run("assisted --trials 4 --seed 2 --out cli_out.csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in("cli_out.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "trial,d,assisted_rate,qi_upper_bound,difference,pass");
  std::remove("cli_out.csv");
}

TEST_CASE("iqsm with a state file") {
  write("cli_rab.json",
        R"({"layout": [["R", 1, "R"], ["A", 2, "A"], ["B", 2, "B"]], "amplitudes": [[0.7071067811865476,0],[0,0],[0.7071067811865476,0],[0,0]]})");
  const Run r = run("iqsm --state-file cli_rab.json --format json");
  std::remove("cli_rab.json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["e0"].get<double>() == doctest::Approx(1.0));
  CHECK(std::abs(j["rows"][0]["margin"].get<double>()) <= 1e-9);
}
