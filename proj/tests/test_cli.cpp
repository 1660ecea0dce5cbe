#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dstable/cli.hpp"
#include "dstable/inversion.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"dstable"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = dstable::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// stdout of the installed binary
std::string run_binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + DSTABLE_CLI_PATH + std::string(" ") + args;
  std::FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[65536];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = ::pclose(pipe);
  CHECK(status == 0);
  return out;
}

std::vector<std::vector<std::string>> csv_body(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string header_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  const std::string prefix = "# " + key + "=";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("cf table") {
    const auto r = run_cli({"cf", "--family", "sds", "--gamma", "0.75", "--sigma", "1", "--a", "0.1", "--tmax", "10",
                            "--points", "1001"});
    REQUIRE(r.code == 0);
    const auto rows = csv_body(r.out);
    CHECK(rows.size() == 1001);
    CHECK(r.out.find("\nt,re,im\n") != std::string::npos);
    CHECK(rows[500] == std::vector<std::string>{"0", "1", "0"});
    CHECK(rows[0][0] == "-10");
    CHECK(rows[1000][0] == "10");
    CHECK(header_value(r.out, "gamma") == "0.75");
    CHECK(header_value(r.out, "seed") == "0");
  }

  TEST_CASE("pmf table sums to one within the alias bound") {
    const auto r = run_cli({"pmf", "--family", "ds", "--alpha", "0.7", "--beta", "0.5", "--sigma", "1", "--a", "0.05",
                            "--n", "65536"});
    REQUIRE(r.code == 0);
    const auto rows = csv_body(r.out);
    CHECK(rows.size() == 65536);
    double s = 0.0;
    for (const auto& row : rows) s += std::stod(row[2]);
    const double bound = std::stod(header_value(r.out, "alias_bound"));
    CHECK(bound > 0.0);
    CHECK(std::abs(s - 1.0) <= bound);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(0.05 * std::stod(rows[1][0])));
  }

  TEST_CASE("pmf rows reproduce the tails report") {
    const std::vector<std::string> fam = {"--family", "sds", "--gamma", "0.9", "--a", "0.5"};
    auto with = [&](std::vector<std::string> head, const std::vector<std::string>& tail) {
      head.insert(head.end(), fam.begin(), fam.end());
      head.insert(head.end(), tail.begin(), tail.end());
      return head;
    };
    const auto pmf = run_cli(with({"pmf"}, {"--n", "65536"}));
    const auto tails = run_cli(with({"tails"}, {"--n", "65536", "--xmin", "5", "--xmax", "500", "--per-decade", "3"}));
    REQUIRE(pmf.code == 0);
    REQUIRE(tails.code == 0);
    std::vector<std::pair<long long, double>> masses;
    for (const auto& row : csv_body(pmf.out)) masses.emplace_back(std::stoll(row[0]), std::stod(row[2]));
    const auto trows = csv_body(tails.out);
    CHECK(trows.size() == 7);
    for (const auto& row : trows) {
      const double x = std::stod(row[0]);
      double s = 0.0;
      for (const auto& [k, m] : masses) {
        if (std::abs(static_cast<double>(k)) * 0.5 > x * (1.0 + 1e-9)) s += m;
      }
      CHECK(std::abs(s - std::stod(row[1])) <= 1e-12);
    }
  }

  TEST_CASE("sampling is deterministic and defaults to seed 0") {
    const std::vector<std::string> args = {"sample", "--family", "tempered-ds", "--alpha", "0.7", "--beta", "0",
                                           "--sigma", "1", "--a", "0.05", "--theta1", "0.05", "--theta2", "0.05",
                                           "--count", "100000", "--seed", "42"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(csv_body(a.out).size() == 100000);
    const auto zero = run_cli({"sample", "--family", "sds", "--gamma", "0.5", "--count", "1000", "--seed", "0"});
    const auto none = run_cli({"sample", "--family", "sds", "--gamma", "0.5", "--count", "1000"});
    CHECK(zero.out == none.out);
    const auto other = run_cli({"sample", "--family", "sds", "--gamma", "0.5", "--count", "1000", "--seed", "1"});
    CHECK(other.out != none.out);
  }

  TEST_CASE("binary output does not depend on threads") {
    const std::string args =
        "sample --family tempered-ds --alpha 0.7 --beta 0 --sigma 1 --a 0.05 --theta1 0.05 --theta2 0.05 "
        "--count 50000 --seed 42";
    const auto one = run_binary(args + " --threads 1");
    const auto eight = run_binary(args + " --threads 8");
    const auto env = run_binary(args, "DSTABLE_THREADS=8");
    CHECK(one == eight);
    CHECK(one == env);
    CHECK(one == run_binary(args + " --threads 1"));
    const std::string pl =
        "prelimit --family tempered-ds --alpha 0.7 --a 0.05 --theta1 0.05 --theta2 0.05 --n-values 1,4 --reps 10000 "
        "--seed 42 --format json";
    CHECK(run_binary(pl + " --threads 1") == run_binary(pl + " --threads 8"));
  }

  TEST_CASE("json output") {
    const auto r = run_cli({"tails", "--family", "truncated-sds", "--gamma", "0.4", "--M", "8", "--format", "json",
                            "--per-decade", "5"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["meta"]["version"] == dstable::kVersion);
    CHECK(doc["meta"]["command"] == "tails");
    CHECK(doc["meta"]["seed"] == 0);
    CHECK(doc["meta"]["config"]["family"] == "truncated-sds");
    CHECK(doc["meta"]["config"]["M"] == 8);
    CHECK(doc["summary"]["super_linear"] == true);
    CHECK(doc["rows"].size() == 6);
    CHECK(doc["rows"][0]["x"] == 10.0);
    CHECK(doc["summary"]["theoretical_constant"].is_null());
  }

  TEST_CASE("converge table is keyed by a") {
    const auto r = run_cli({"converge", "--family", "polylog-ds", "--alpha", "0.8", "--a-values", "0.5,0.1,0.02"});
    REQUIRE(r.code == 0);
    const auto rows = csv_body(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(std::stod(rows[1][2]) < std::stod(rows[0][2]));
    CHECK(std::stod(rows[2][2]) < std::stod(rows[1][2]));
    CHECK(header_value(r.out, "a_values") == "[0.5,0.1,0.02]");
  }

  TEST_CASE("out file") {
    const std::string path = "dstable_cli_test_out.csv";
    const auto r = run_cli({"cf", "--family", "ds", "--alpha", "0.5", "--points", "3", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(csv_body(ss.str()).size() == 3);
    std::remove(path.c_str());
  }

  TEST_CASE("argument errors exit 2 and name the constraint") {
    auto r = run_cli({"cf", "--family", "nope"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown family") != std::string::npos);
    r = run_cli({"cf", "--family", "sds", "--gamma", "1.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("gamma must lie in (0, 1]") != std::string::npos);
    r = run_cli({"cf", "--family", "sds"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--gamma is required") != std::string::npos);
    r = run_cli({"sample", "--family", "truncated-sds", "--gamma", "0.4"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--M is required") != std::string::npos);
    r = run_cli({"frobnicate"});
    CHECK(r.code == 2);
    r = run_cli({"cf", "--family", "sds", "--gamma", "0.5", "--format", "xml"});
    CHECK(r.code == 2);
    r = run_cli({"pmf", "--family", "sds", "--gamma", "0.5", "--n", "1000"});
    CHECK(r.code == 2);
    r = run_cli({"converge", "--family", "polylog-ds", "--alpha", "2.5"});
    CHECK(r.code == 2);
    r = run_cli({"prelimit", "--family", "sds", "--gamma", "0.5"});
    CHECK(r.code == 2);
    r = run_cli({"--help"});
    CHECK(r.code == 0);
  }

  TEST_CASE("precision failures exit 3") {
    const auto r = run_cli({"pmf", "--family", "sds", "--gamma", "0.3", "--n-max", "4096"});
    CHECK(r.code == 3);
    CHECK(r.err.find("alias bound") != std::string::npos);
  }
}
