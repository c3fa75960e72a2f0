#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "lucasmon");
  std::ostringstream out, err;
  const int code = lucasmon::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(LUCASMON_TEST_DATA) + "/" + name; }

int rows(const std::string& csv) {
  int n = 0;
  for (char c : csv) n += c == '\n';
  return n - 1;
}

}  // namespace

TEST_CASE("terms") {
  const auto r = run({"terms", "--p", "1", "--q", "-1", "--n-max", "12"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("1,1,-\n2,1,-\n") != std::string::npos);
  CHECK(r.out.find("6,8,-\n") != std::string::npos);
  CHECK(r.out.find("12,144,-\n") != std::string::npos);
  CHECK(r.out.find("8,21,7\n") != std::string::npos);
  CHECK(rows(r.out) == 12);
  int dashes = 0;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) dashes += line.back() == '-';
  CHECK(dashes == 4);

  CHECK(run({"terms", "--p", "3", "--q", "2", "--n-max", "6"}).out.find("6,63,-") != std::string::npos);
  CHECK(run({"terms", "--n-max", "1"}).out == "n,value,primitive_divisor\n1,1,-\n");
  CHECK(run({"terms", "--p", "2", "--q", "1"}).code == 2);
  CHECK(run({"terms", "--p", "1", "--preset", "pell"}).code == 2);
}

TEST_CASE("count, enumerate and factor") {
  CHECK(run({"count", "--p", "1", "--q", "-1", "--x", "34"}).out == "23\n");
  CHECK(run({"count", "--x", "1000000", "--threads", "3"}).out == "5532\n");
  const auto e = run({"enumerate", "--p", "1", "--q", "-1", "--x", "12", "--format", "csv"});
  CHECK(rows(e.out) == 10);
  CHECK(e.out.rfind("value,omega,Omega,factorization\n", 0) == 0);
  CHECK(run({"factor", "--p", "1", "--q", "-1", "--n", "26"}).out == "26 = F[3]·F[7] (2·13)\n");
  CHECK(run({"factor", "--n", "1"}).out == "1 = 1 (empty product)\n");
  const auto j = nlohmann::json::parse(run({"factor", "--n", "144", "--format", "json"}).out);
  CHECK(j["Omega"] == 6);
  CHECK(run({"factor", "--n", "7"}).code == 2);
  CHECK(run({"enumerate", "--x", "1000000000", "--format", "json"}).code == 0);
  CHECK(run({"count"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"count", "--x", "10", "--format", "csv"}).code == 2);
}

TEST_CASE("constants and determinism") {
  const auto a = run({"constants"});
  const auto b = run({"constants", "--preset", "fibonacci"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  for (const char* key : {"P", "Q", "log_phi", "A", "b", "k1", "kappa1", "a1", "a2", "b1_statement",
                          "b1_proof", "b2", "precision_bits", "truncation_L"}) {
    CAPTURE(key);
    CHECK(j.contains(key));
  }
  CHECK(nlohmann::json::parse(j.dump(2)) == j);
  CHECK(run({"constants", "--precision-bits", "256"}).code == 2);
  CHECK(run({"simulate-limit", "--samples", "50", "--seed", "9"}).out ==
        run({"simulate-limit", "--samples", "50", "--seed", "9", "--threads", "2"}).out);
}

TEST_CASE("environment overrides") {
  ::setenv("LUCASMON_PRESET", "mersenne", 1);
  const auto r = run({"count", "--x", "1000"});
  ::unsetenv("LUCASMON_PRESET");
  CHECK(r.out == "40\n");
  CHECK(run({"count", "--x", "1000"}).out != "40\n");
}

TEST_CASE("output file") {
  const std::string path = "cli_output_test.csv";
  REQUIRE(run({"enumerate", "--x", "12", "--output", path}).code == 0);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(rows(buf.str()) == 10);
  std::remove(path.c_str());
}

TEST_CASE("verify commands") {
  const auto m = run({"verify-mellin", "--x", "100", "--u", "1"});
  CHECK(m.code == 0);
  CHECK(m.out.rfind("x,u,r,integral,smoothed_sum,rel_err,tol\n", 0) == 0);
  CHECK(rows(m.out) == 1);
  CHECK(run({"verify-mellin", "--x", "100", "--u", "1", "--tol", "1e-9"}).code == 4);
  const auto d = run({"verify-dirichlet"});
  CHECK(d.code == 0);
  CHECK(rows(d.out) == 3);
  CHECK(run({"verify-dirichlet", "--mode", "D", "--v", "0.2"}).code == 0);
  CHECK(run({"verify-dirichlet", "--tol", "0.01"}).code == 4);
  CHECK(run({"verify-dirichlet", "--r", "0.1", "--r", "0.2"}).code == 2);
}

TEST_CASE("stats and simulate-limit") {
  const auto s = run({"stats", "--x", "1000000", "--samples", "2000"});
  REQUIRE(s.code == 0);
  const auto j = nlohmann::json::parse(s.out);
  CHECK(j["omega"]["n_elements"] == 5532);
  CHECK(j["limit_law"]["n_samples"] == 2000);
  const auto sim = run({"simulate-limit", "--samples", "10", "--seed", "3"});
  CHECK(sim.out.find("# seed=3\n") != std::string::npos);
  CHECK(sim.out.find("# n_samples=10\n") != std::string::npos);
  CHECK(run({"simulate-limit", "--truncation", "50"}).code == 4);
}

TEST_CASE("oeis-check") {
  const auto a = run({"oeis-check", "--bfile", data("a065108_prefix.txt")});
  CHECK(a.code == 0);
  CHECK(a.out == "agreement over 23 terms (b-file 23, computed 23)\n");
  CHECK(run({"oeis-check", "--bfile", data("a000045_b.txt"), "--stream", "terms"}).code == 0);
  CHECK(run({"oeis-check", "--bfile", data("empty_b.txt")}).out.find("agreement over 0 terms") == 0);
  CHECK(run({"oeis-check", "--bfile", data("malformed_b.txt")}).code == 2);
  // Pell numbers are not products of Fibonacci numbers.
  const auto bad = run({"oeis-check", "--bfile", data("a000045_b.txt"), "--stream", "terms", "--preset", "pell"});
  CHECK(bad.code == 4);
  CHECK(bad.out.find("mismatch at index 2: b-file 1, computed 2") == 0);
}
