// End-to-end checks of the CLI surface: spawn the binary, parse its output.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& stdin_file = "") {
  std::string cmd = std::string(MEANDERS_CLI_PATH) + " " + args;
  if (!stdin_file.empty()) cmd += " < " + stdin_file;
  cmd += " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe))
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("sample emits valid JSON lines deterministically") {
  const auto a = run_cli("sample --family uniform --n 6 --seed 5 --count 3");
  const auto b = run_cli("sample --family uniform --n 6 --seed 5 --count 3");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  const auto lines = json_lines(a.out);
  REQUIRE(lines.size() == 3);
  for (const auto& j : lines) {
    CHECK(j.at("n") == 6);
    CHECK(j.at("upper").size() == 12);
    CHECK(j.at("lower").size() == 12);
  }
}

TEST_CASE("sample piped into stats yields consistent per-system records") {
  const char* path = "/tmp/meanders_cli_test_systems.jsonl";
  {
    const auto s = run_cli("sample --family comb --n 5 --seed 11 --count 4");
    REQUIRE(s.exit_code == 0);
    std::ofstream f(path);
    f << s.out;
  }
  const auto r = run_cli("stats --in " + std::string(path));
  CHECK(r.exit_code == 0);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 4);
  for (const auto& j : lines) {
    CHECK(j.at("n") == 5);
    long weighted = 0;
    for (const auto& [k, c] : j.at("half_length_histogram").items())
      weighted += std::stol(k) * c.get<long>();
    CHECK(weighted == 5);
    CHECK(j.at("cycles").get<long>() >= 1);
  }
  std::remove(path);
}

TEST_CASE("stats rejects crossing input with exit code 2") {
  const char* path = "/tmp/meanders_cli_test_bad.jsonl";
  {
    std::ofstream f(path);
    f << R"({"n":2,"upper":[2,3,0,1],"lower":[1,0,3,2]})" << "\n";
  }
  const auto r = run_cli("stats --in " + std::string(path));
  CHECK(r.exit_code == 2);
  std::remove(path);
}

TEST_CASE("exact subcommand prints rational and float values") {
  const auto r = run_cli("exact --stat ringlets --n 2");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("value") == "3/4");

  const auto d = run_cli("exact --stat double_exp --n 1024 --x 0");
  const auto jd = nlohmann::json::parse(d.out);
  CHECK(jd.at("value").get<double>() == Catch::Approx(std::exp(-0.5)).epsilon(1e-9));

  const auto t = run_cli("exact --stat tau --weights 1,0,1");
  const auto jt = nlohmann::json::parse(t.out);
  CHECK(jt.at("value").get<double>() == Catch::Approx(1.0).margin(1e-9));

  CHECK(run_cli("exact --stat no_such_stat --n 3").exit_code == 2);
  CHECK(run_cli("exact --stat block_dist --n 4").exit_code == 2);  // missing --k
}

TEST_CASE("enumerate subcommand") {
  const auto r = run_cli("enumerate --n 2 --stat cycle_count");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("total") == 4);
  CHECK(j.at("counts").at("1") == 2);
  CHECK(j.at("mean") == "3/2");

  const auto m = run_cli("enumerate --meander-numbers --max-k 4");
  const auto jm = nlohmann::json::parse(m.out);
  CHECK(jm.at("meander_numbers").at("4") == 42);
  CHECK(jm.at("superadditive") == true);

  CHECK(run_cli("enumerate --n 9 --stat cycle_count").exit_code == 2);  // size guard
}

TEST_CASE("experiment subcommand writes CSV with the documented header") {
  const char* path = "/tmp/meanders_cli_test_rows.csv";
  const auto r = run_cli(
      "experiment --name ringlets --family uniform --n-list 20,40 --samples 200 "
      "--seed 3 --threads 2 --out " +
      std::string(path));
  CHECK(r.exit_code == 0);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "experiment,family,n,samples,seed,statistic,mean,stderr,extra");
  long rows = 0;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
  std::remove(path);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("sample").exit_code == 1);           // missing required --n
  CHECK(run_cli("frobnicate --n 2").exit_code == 1);
}

TEST_CASE("domain errors exit with code 2") {
  CHECK(run_cli("sample --family 'rainbow(9,1)' --n 4 --seed 1").exit_code == 2);
  CHECK(run_cli("experiment --name nope --family uniform --n-list 10 --samples 5").exit_code == 2);
}
