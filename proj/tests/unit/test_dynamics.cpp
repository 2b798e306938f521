#include "quadham/dynamics.hpp"
#include "quadham/systems.hpp"

#include <doctest.h>

#include <sstream>

using namespace quadham;

namespace {

VectorField harmonic() { return instantiate(find_system("harmonic")).field; }

ScalarField energy() { return instantiate(find_system("harmonic")).integrals.at(0).field; }

State start() { return State((Vec(2) << 1.0, 0.0).finished()); }

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("rk4") == Method::rk4);
  CHECK(parse_method("rk45") == Method::dp45);
  CHECK(parse_method("dp45") == Method::dp45);
  CHECK(std::string(method_name(Method::euler)) == "euler");
  CHECK_THROWS_AS(parse_method("leapfrog"), std::invalid_argument);
}

TEST_CASE("fixed-step and adaptive integration of the oscillator") {
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  cfg.dt = 1e-3;
  const Trajectory rk = integrate(harmonic(), start(), cfg, {energy()});
  REQUIRE_FALSE(rk.aborted);
  CHECK(rk.samples.back().t == 2.0);
  CHECK(rk.samples.back().coords[0] == doctest::Approx(std::cos(2.0)).epsilon(1e-12));
  CHECK(rk.drift.at(0) < 1e-12);
  CHECK(rk.samples.size() == 2001);

  cfg.method = Method::dp45;
  cfg.dt = 0.1;
  const Trajectory dp = integrate(harmonic(), start(), cfg);
  REQUIRE_FALSE(dp.aborted);
  CHECK(dp.samples.back().t == 2.0);
  CHECK(std::abs(dp.samples.back().coords[1] + std::sin(2.0)) < 1e-8);
  CHECK(dp.steps < 2000);
}

TEST_CASE("record_every keeps the last sample") {
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  cfg.dt = 0.01;
  cfg.record_every = 30;
  const Trajectory tr = integrate(harmonic(), start(), cfg);
  CHECK(tr.samples.size() == 5);  // t = 0, 0.3, 0.6, 0.9, 1.0
  CHECK(tr.samples.back().t == 1.0);
}

TEST_CASE("zero-length interval yields the initial state only") {
  IntegratorConfig cfg;
  cfg.t_end = 0.0;
  const Trajectory tr = integrate(harmonic(), start(), cfg, {energy()});
  CHECK(tr.samples.size() == 1);
  CHECK(tr.steps == 0);
  CHECK_FALSE(tr.aborted);
}

TEST_CASE("integration stops at a domain exit and keeps the partial trajectory") {
  VectorField X;
  X.dim = 1;
  X.eval = [](const State&) { return Vec::Ones(1); };
  X.domain = [](const State& s) { return s.coords[0] < 0.5; };
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  cfg.dt = 0.01;
  const Trajectory tr = integrate(X, State(Vec::Zero(1)), cfg);
  CHECK(tr.aborted);
  CHECK(tr.abort_reason.find("domain") != std::string::npos);
  CHECK(tr.samples.back().coords[0] == doctest::Approx(0.5).epsilon(0.03));

  CHECK_THROWS_AS(integrate(X, State(Vec::Ones(1)), cfg), DomainError);
  CHECK_THROWS_AS(integrate(X, State(Vec::Zero(2)), cfg), DimensionError);
}

TEST_CASE("blow-up is reported instead of propagating infinities") {
  VectorField X;
  X.dim = 1;
  X.eval = [](const State& s) { return Vec(s.coords.array().square()); };
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  cfg.dt = 0.01;
  const Trajectory tr = integrate(X, State(Vec::Ones(1)), cfg);
  CHECK(tr.aborted);
  for (const auto& s : tr.samples) CHECK(std::isfinite(s.coords[0]));
}

TEST_CASE("drift is measured up to the first out-of-domain sample") {
  Trajectory tr;
  tr.samples = {State(Vec::Ones(1) * 1.0), State(Vec::Ones(1) * 2.0), State(Vec::Ones(1) * -1.0)};
  ScalarField f;
  f.name = "log";
  f.dim = 1;
  f.eval = [](const State& s) { return std::log(s.coords[0]); };
  f.domain = [](const State& s) { return s.coords[0] > 0.0; };
  const auto d = drift_report(tr, {f});
  REQUIRE(d.size() == 1);
  CHECK(d[0].domain_exit);
  CHECK(d[0].samples_used == 2);
  CHECK(d[0].drift == doctest::Approx(std::log(2.0)));
}

TEST_CASE("empirical orders") {
  const Vec exact = (Vec(2) << std::cos(1.0), -std::sin(1.0)).finished();
  const double rk4 = convergence_order(harmonic(), start(), 1.0, Method::rk4, 0.1, exact);
  CHECK(rk4 > 3.8);
  CHECK(rk4 < 4.2);
  const double euler = convergence_order(harmonic(), start(), 1.0, Method::euler, 0.01);
  CHECK(euler > 0.9);
  CHECK(euler < 1.1);
  CHECK_THROWS(convergence_order(harmonic(), start(), 1.0, Method::dp45, 0.1));
}

TEST_CASE("Lyapunov spectrum of a rotation is zero and of a saddle is (+1, -1)") {
  LyapunovConfig cfg;
  cfg.T = 100.0;
  cfg.seed = 3;
  const auto r = lyapunov_spectrum(harmonic(), start(), cfg);
  REQUIRE(r.exponents.size() == 2);
  CHECK(std::abs(r.exponents[0]) < 0.01);
  CHECK(std::abs(r.exponents[1]) < 0.01);

  VectorField saddle;
  saddle.dim = 2;
  saddle.eval = [](const State& s) { return Vec((Vec(2) << s.coords[0], -s.coords[1]).finished()); };
  cfg.T = 500.0;
  const auto q = lyapunov_spectrum(saddle, State(Vec::Zero(2)), cfg);
  CHECK(q.exponents[0] == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(q.exponents[1] == doctest::Approx(-1.0).epsilon(5e-3));
  CHECK(q.mean_divergence == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("finite-difference Jacobian") {
  const Mat j = jacobian_fd(harmonic(), start());
  CHECK(j(0, 1) == doctest::Approx(1.0));
  CHECK(j(1, 0) == doctest::Approx(-1.0));
  CHECK(std::abs(j(0, 0)) < 1e-9);
}

TEST_CASE("CSV export") {
  IntegratorConfig cfg;
  cfg.t_end = 0.002;
  cfg.dt = 1e-3;
  const Trajectory tr = integrate(harmonic(), start(), cfg, {energy()});
  std::ostringstream out;
  write_csv(out, tr, {"q", "p"});
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "t,q,p,E\r");
  std::getline(in, row);
  CHECK(row == "0,1,0,0.5\r");
  std::getline(in, row);
  // 17 significant digits round-trip the doubles.
  const double q = std::stod(row.substr(row.find(',') + 1));
  CHECK(q == tr.samples[1].coords[0]);
}
