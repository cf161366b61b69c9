#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = siqc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "siqc_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("every subcommand is byte-identical across runs") {
  const std::vector<std::vector<std::string>> commands{
      {"design-report"},
      {"scalability-curve", "--n-max", "2000", "--points", "20"},
      {"schedule", "--n", "6", "--recouple", "1,4"},
      {"simulate-dynamics", "--n", "4", "--cycles", "2"},
      {"simulate-dynamics", "--n", "3", "--nutation-hz", "2000"},
      {"cooling", "--n0", "243", "--p0", "0.05"},
      {"cooling", "--n0", "12", "--target-p", "0.2", "--mode", "exact"},
      {"budget", "--n", "60"},
      {"readout", "--settle", "0.2", "--window", "0.2", "--points", "100"},
  };
  for (const auto& cmd : commands) {
    for (const std::string format : {"json", "csv"}) {
      std::vector<std::string> args{"--seed", "11", "--format", format};
      args.insert(args.end(), cmd.begin(), cmd.end());
      const Run a = invoke(args);
      const Run b = invoke(args);
      INFO(cmd.front() << " " << format << ": " << a.err);
      CHECK(a.code == 0);
      CHECK_FALSE(a.out.empty());
      CHECK(a.out == b.out);
    }
  }
}

TEST_CASE("seed changes random scenarios") {
  const Run a = invoke({"--seed", "1", "simulate-dynamics", "--n", "3"});
  const Run b = invoke({"--seed", "2", "simulate-dynamics", "--n", "3"});
  CHECK(a.code == 0);
  CHECK(a.out != b.out);
}

TEST_CASE("scalability curve CSV columns") {
  const Run r = invoke({"--format", "csv", "scalability-curve", "--t2", "25,1e4", "--n-max", "100", "--points", "5"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  const auto cols = split_csv_line(header);
  REQUIRE(cols.size() == 4);
  CHECK(cols[0] == "n");
  CHECK(cols[1] == "p_min");
  CHECK(cols[2].rfind("gates_L_T2_", 0) == 0);
  CHECK(cols[3].rfind("gates_L_T2_", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(lines, line); ++rows) CHECK(split_csv_line(line).size() == 4);
  CHECK(rows == 5);
}

TEST_CASE("--out writes the same bytes as stdout") {
  const fs::path path = scratch("budget.json");
  const Run to_file = invoke({"--out", path.string(), "budget", "--n", "20"});
  const Run to_stdout = invoke({"budget", "--n", "20"});
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream f(path, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text == to_stdout.out);
}

TEST_CASE("schedule round trips through simulate-dynamics") {
  const fs::path sched = scratch("sched.json");
  const fs::path scen = scratch("scenario.json");
  REQUIRE(invoke({"--out", sched.string(), "schedule", "--n", "3"}).code == 0);
  write_file(scen, R"({"qubits": ["plus", "up", {"thermal": 0.3}]})");
  const Run r = invoke({"--format", "csv", "simulate-dynamics", "--schedule", sched.string(), "--scenario",
                        scen.string(), "--cycles", "3"});
  INFO(r.err);
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("cycle,t_s,", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"no-such-command"}).code == 2);
  CHECK(invoke({"--format", "xml", "design-report"}).code == 2);
  CHECK(invoke({"--config", "/nonexistent/siqc.json", "design-report"}).code == 2);

  const fs::path bad = scratch("bad.json");
  write_file(bad, R"({"bridge_length": -1})");
  CHECK(invoke({"--config", bad.string(), "design-report"}).code == 2);
  write_file(bad, R"({"not_a_key": 1})");
  CHECK(invoke({"--config", bad.string(), "design-report"}).code == 2);

  const fs::path loud = scratch("loud.json");
  write_file(loud, R"({"noise_threshold_override": 1e-10})");
  const Run r = invoke({"--config", loud.string(), "scalability-curve", "--n-max", "10", "--points", "3"});
  CHECK(r.code == 3);
  CHECK(r.err.find("not measurable") != std::string::npos);
  CHECK(invoke({"--config", loud.string(), "design-report"}).code == 0);

  CHECK(invoke({"schedule", "--n", "4", "--recouple", "1,1"}).code == 2);
  CHECK(invoke({"cooling", "--rounds", "2", "--target-p", "0.3"}).code == 2);
}
