#include "quadham/cli.hpp"
#include "quadham/verify.hpp"

#include <doctest.h>

#include <cstdlib>
#include <set>
#include <sstream>

using namespace quadham;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "quadham");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("verification report structure") {
  VerifyConfig cfg;
  cfg.samples = 30;
  cfg.seed = 1;
  const auto r = verify_system("shivamoggi", cfg);
  CHECK_FALSE(r.hard_failure());
  std::set<std::string> ids;
  for (const auto& c : r.claims) {
    CHECK(ids.insert(c.id).second);
    CHECK_FALSE(c.anchor.empty());
  }
  CHECK(std::is_sorted(r.claims.begin(), r.claims.end(), [](const Claim& a, const Claim& b) { return a.id < b.id; }));
  for (const char* id : {"compat.L12", "compat.L13", "compat.L23", "negative.corrupted_jacobi", "displayed.N3"})
    CHECK_MESSAGE(r.find(id) != nullptr, id);
  CHECK(r.find("compat.L12")->residual < 1e-10);
  CHECK(r.find("displayed.N3")->status == ClaimStatus::mismatch_reported);

  const auto j = to_json(r, true);
  CHECK(j["environment"]["seed"] == 1);
  CHECK(j["environment"]["samples"] == 30);
  CHECK_FALSE(j["environment"].contains("timestamp"));
  CHECK(to_json(r, false)["environment"].contains("timestamp"));
  CHECK(j["claims"].size() == r.claims.size());
}

TEST_CASE("invalid verification configs") {
  VerifyConfig cfg;
  cfg.samples = 0;
  CHECK_THROWS_AS(verify_system("shivamoggi", cfg), std::invalid_argument);
  cfg.samples = 10;
  cfg.tol_scale = 0.0;
  CHECK_THROWS_AS(verify_system("shivamoggi", cfg), std::invalid_argument);
  cfg.tol_scale = 1.0;
  CHECK_THROWS_AS(verify_system("nope", cfg), UnknownSystemError);
  cfg.params = {{"gamma", 5.0}};
  CHECK_THROWS_AS(verify_system("lu_autonomous", cfg), ConstraintError);
}

TEST_CASE("tightening tolerances turns passes into failures") {
  VerifyConfig cfg;
  cfg.samples = 20;
  cfg.tol_scale = 1e-12;
  CHECK(verify_system("shivamoggi", cfg).hard_failure());
}

TEST_CASE("merging reports") {
  nlohmann::json a = {{"system", "a"}, {"claims", {{{"id", "x"}}}}, {"environment", {{"version", "1"}, {"seed", 1}}}};
  nlohmann::json b = {{"system", "b"}, {"claims", {{{"id", "y"}}, {{"id", "z"}}}}, {"environment", {{"version", "1"}, {"seed", 2}}}};
  auto m = merge_reports({a, b});
  CHECK(m["claims"].size() == 3);
  CHECK(m["claims"][2]["system"] == "b");
  CHECK(m["sources"][1]["environment"]["seed"] == 2);
  CHECK_FALSE(m.contains("warning"));
  b["environment"]["version"] = "2";
  CHECK(merge_reports({a, b}).contains("warning"));
  CHECK_THROWS(merge_reports({}));
}

TEST_CASE("command line exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"verify"}).code == kExitUsage);
  CHECK(cli({"verify", "nosuch"}).code == kExitUsage);
  CHECK(cli({"verify", "shivamoggi", "--samples", "0"}).code == kExitUsage);
  CHECK(cli({"verify", "shivamoggi", "-p", "omega=1"}).code == kExitUsage);
  CHECK(cli({"verify", "shivamoggi", "-p", "nonsense"}).code == kExitUsage);
  const Run c = cli({"verify", "lu_autonomous", "-p", "alpha=2", "--samples", "5"});
  CHECK(c.code == kExitConstraint);
  CHECK(c.err.find("required") != std::string::npos);
  CHECK(cli({"verify", "lorenz_conservative", "--samples", "10", "--tol", "1e-12"}).code == kExitFailure);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"--version"}).out.find(kVersion) != std::string::npos);
}

TEST_CASE("verify writes a JSON report to stdout") {
  const Run r = cli({"verify", "lorenz_rho0", "--samples", "20", "--seed", "4", "--deterministic"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["system"] == "lorenz_rho0");
  CHECK(j["environment"]["seed"] == 4);
  CHECK(r.out == cli({"verify", "lorenz_rho0", "--samples", "20", "--seed", "4", "--deterministic"}).out);
}

TEST_CASE("QUADHAM_SEED supplies the default seed") {
  setenv("QUADHAM_SEED", "123", 1);
  const Run r = cli({"verify", "harmonic", "--samples", "5", "--deterministic"});
  CHECK(nlohmann::json::parse(r.out)["environment"]["seed"] == 123);
  const Run explicit_seed = cli({"verify", "harmonic", "--samples", "5", "--seed", "9", "--deterministic"});
  CHECK(nlohmann::json::parse(explicit_seed.out)["environment"]["seed"] == 9);
  setenv("QUADHAM_SEED", "abc", 1);
  CHECK(cli({"verify", "harmonic"}).code == kExitUsage);
  unsetenv("QUADHAM_SEED");
}

TEST_CASE("integrate argument checks") {
  CHECK(cli({"integrate", "shivamoggi", "--x0", "1,2,1"}).code == kExitUsage);
  CHECK(cli({"integrate", "shivamoggi", "--x0", "1,2,1,a"}).code == kExitUsage);
  CHECK(cli({"integrate", "shivamoggi", "--method", "leapfrog", "--t1", "0"}).code == kExitUsage);
  CHECK(cli({"integrate", "shivamoggi", "--format", "xml", "--t1", "0"}).code == kExitUsage);
  const Run r = cli({"integrate", "harmonic", "--t1", "0"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "t,q,p,E\r\n0,1,0,0.5\r\n");
}

TEST_CASE("lyapunov defaults and output") {
  const Run r = cli({"lyapunov", "harmonic", "--T", "50"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["exponents"].size() == 2);
  CHECK(std::abs(j["exponents"][0].get<double>()) < 0.02);
  CHECK_FALSE(j.contains("note"));
  CHECK(cli({"lyapunov", "harmonic", "--T", "-1"}).code == kExitUsage);
}

TEST_CASE("report needs inputs") {
  CHECK(cli({"report"}).code == kExitUsage);
  CHECK(cli({"report", "/nonexistent/report.json"}).code == kExitUsage);
}
