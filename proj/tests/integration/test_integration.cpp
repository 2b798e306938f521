// End-to-end runs of the command line against files on disk.

#include "quadham/cli.hpp"
#include "quadham/verify.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace quadham;
namespace fs = std::filesystem;

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

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "quadham_integration";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("every registered system verifies without hard failures") {
  for (const char* sys : {"shivamoggi", "raychaudhuri", "lorenz_rho0", "lorenz_conservative", "lu_original",
                          "lu_transformed", "lu_autonomous", "qi_original", "qi_transformed", "qi_special",
                          "harmonic"}) {
    const Run r = cli({"verify", sys, "--samples", "100", "--seed", "7", "--deterministic"});
    CHECK_MESSAGE(r.code == kExitOk, sys, "\n", r.err);
  }
}

TEST_CASE("verify shivamoggi lists compatibility maxima") {
  const Run r = cli({"verify", "shivamoggi", "--samples", "200", "--seed", "7", "--deterministic"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  int found = 0;
  for (const auto& c : j["claims"])
    if (c["id"].get<std::string>().rfind("compat.", 0) == 0) {
      ++found;
      CHECK(c["residual"].get<double>() < 1e-10);
      CHECK(c["status"] == "pass");
    }
  CHECK(found == 3);
}

TEST_CASE("verify lu_autonomous: integrals and conformal factor") {
  const auto j = nlohmann::json::parse(cli({"verify", "lu_autonomous", "--deterministic"}).out);
  std::map<std::string, std::string> status;
  for (const auto& c : j["claims"]) status[c["id"]] = c["status"];
  for (const char* id : {"integral.H1.conserved", "integral.H2.conserved", "integral.H3.conserved",
                         "structure.N1.conformal_match", "structure.N2.conformal_match", "structure.N3.conformal_match"})
    CHECK_MESSAGE(status[id] == "pass", id);
}

TEST_CASE("verify qi_special reports the measured H3 law") {
  const Run r = cli({"verify", "qi_special", "--deterministic"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  std::map<std::string, nlohmann::json> claims;
  for (const auto& c : j["claims"]) claims[c["id"]] = c;
  CHECK(claims["integral.H1.conserved"]["status"] == "pass");
  CHECK(claims["integral.H2.conserved"]["status"] == "pass");
  CHECK(claims["candidate.H3.conserved"]["status"] == "mismatch-reported");
  CHECK(claims["candidate.H3.drift_law"]["status"] == "pass");
}

TEST_CASE("integrate writes a CSV trajectory and prints the drift summary") {
  const fs::path out = scratch("traj.csv");
  const Run r = cli({"integrate", "shivamoggi", "--x0", "1,2,1,1", "--t1", "0.5", "--dt", "1e-3", "--out", out.string(),
                     "--record-every", "10"});
  REQUIRE(r.code == kExitOk);
  const auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 52);  // header plus 51 samples
  CHECK(rows[0] == "t,u,x,y,z,H1,H2,H3\r");
  int commas = 0;
  for (char ch : rows[25]) commas += ch == ',';
  CHECK(commas == 7);
  const auto summary = nlohmann::json::parse(r.out);
  for (const auto& d : summary["drift"]) CHECK(d["drift"].get<double>() < 1e-7);

  const fs::path single = scratch("single.csv");
  REQUIRE(cli({"integrate", "shivamoggi", "--x0", "1,2,1,1", "--t1", "0", "--out", single.string()}).code == kExitOk);
  CHECK(lines(slurp(single)).size() == 2);
}

TEST_CASE("finite-time blow-up keeps the partial trajectory and exits nonzero") {
  // From (1, 2, 1, 1) z grows like z^2 and escapes before t = 1.
  const fs::path out = scratch("blowup.csv");
  const Run r = cli({"integrate", "shivamoggi", "--x0", "1,2,1,1", "--t1", "10", "--out", out.string()});
  CHECK(r.code == kExitFailure);
  const auto summary = nlohmann::json::parse(r.out);
  CHECK(summary["aborted"] == true);
  CHECK(summary["abort_reason"] == "non-finite state");
  const auto rows = lines(slurp(out));
  CHECK(rows.size() > 100);
  CHECK(std::stod(rows.back()) < 1.0);
}

TEST_CASE("integrate with the adaptive method and JSON output") {
  const Run r = cli({"integrate", "lu_autonomous", "--method", "dp45", "--t1", "5", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["method"] == "dp45");
  CHECK(j["samples"].back()["t"].get<double>() == 5.0);
  for (const auto& d : j["drift"]) CHECK(d["drift"].get<double>() < 1e-7);
}

TEST_CASE("integrate rejects a backwards interval and honors parameters") {
  CHECK(cli({"integrate", "harmonic", "--t0", "1", "--t1", "0"}).code == kExitUsage);
  const Run r = cli({"integrate", "lu_original", "-p", "alpha=0.5", "--t1", "0.5", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["params"]["alpha"] == 0.5);
}

TEST_CASE("lyapunov on the superintegrable Lu system is regular") {
  const Run r = cli({"lyapunov", "lu_autonomous", "--T", "2000", "--seed", "1"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["exponents"].size() == 4);
  CHECK(std::abs(j["exponents"][0].get<double>()) < 0.02);

  const auto d = nlohmann::json::parse(cli({"lyapunov", "harmonic", "--T", "100"}).out);
  for (const auto& e : d["exponents"]) CHECK(std::abs(e.get<double>()) < 0.01);
}

TEST_CASE("lyapunov notes the default horizon") {
  const auto j = nlohmann::json::parse(cli({"lyapunov", "harmonic"}).out);
  CHECK(j["T"] == 1000.0);
  CHECK(j.contains("note"));
}

TEST_CASE("report merges files from verify") {
  const fs::path a = scratch("a.json"), b = scratch("b.json"), merged = scratch("merged.json");
  REQUIRE(cli({"verify", "harmonic", "--samples", "10", "--deterministic", "--out", a.string()}).code == kExitOk);
  REQUIRE(cli({"verify", "lorenz_rho0", "--samples", "10", "--deterministic", "--out", b.string()}).code == kExitOk);
  REQUIRE(cli({"report", a.string(), b.string(), "--out", merged.string()}).code == kExitOk);
  const auto m = nlohmann::json::parse(slurp(merged));
  const auto ja = nlohmann::json::parse(slurp(a)), jb = nlohmann::json::parse(slurp(b));
  CHECK(m["claims"].size() == ja["claims"].size() + jb["claims"].size());
  CHECK(m["sources"].size() == 2);
  CHECK(m["version"] == kVersion);
  CHECK_FALSE(m.contains("warning"));

  // A report from another version triggers the warning.
  auto old = ja;
  old["environment"]["version"] = "0.0.1";
  const fs::path c = scratch("old.json");
  std::ofstream(c) << old.dump();
  CHECK(nlohmann::json::parse(cli({"report", a.string(), c.string()}).out).contains("warning"));

  const fs::path junk = scratch("junk.json");
  std::ofstream(junk) << "{ not json";
  CHECK(cli({"report", junk.string()}).code == kExitUsage);
}

TEST_CASE("reports are byte-identical for identical seeds") {
  const fs::path a = scratch("det_a.json"), b = scratch("det_b.json");
  for (const auto& p : {a, b})
    REQUIRE(cli({"verify", "qi_transformed", "--samples", "50", "--seed", "3", "--deterministic", "--out", p.string()})
                .code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  const fs::path c = scratch("det_c.json");
  cli({"verify", "qi_transformed", "--samples", "50", "--seed", "4", "--deterministic", "--out", c.string()});
  CHECK(slurp(a) != slurp(c));
}
