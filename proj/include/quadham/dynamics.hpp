#pragma once

#include "quadham/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>

namespace quadham {

enum class Method { rk4, dp45, euler };

const char* method_name(Method m);
Method parse_method(const std::string& name);

struct IntegratorConfig {
  Method method = Method::rk4;
  double dt = 1e-3;     // fixed step, or initial step for dp45
  double rtol = 1e-10;  // dp45 only
  double atol = 1e-12;  // dp45 only
  double t_end = 1.0;   // absolute end time
  std::size_t max_steps = 50'000'000;
  std::size_t record_every = 1;  // keep every n-th accepted step (the last one always)
};

struct Trajectory {
  std::vector<State> samples;
  std::vector<std::string> integral_names;
  // integral_series[k][i] is integral k at sample i.
  std::vector<std::vector<double>> integral_series;
  std::vector<double> drift;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  bool aborted = false;
  std::string abort_reason;
};

/// Integrates from s0.t to cfg.t_end. Integrals are sampled at every kept
/// step; drift is filled as in drift_report. Stops early (aborted = true) on
/// a non-finite state, a domain exit of the field, step underflow or the
/// step budget, keeping the partial trajectory.
Trajectory integrate(const VectorField& X, const State& s0, const IntegratorConfig& cfg,
                     const std::vector<ScalarField>& integrals = {});

struct DriftEntry {
  std::string name;
  double drift = 0.0;
  bool domain_exit = false;  // drift measured up to the first out-of-domain sample
  std::size_t samples_used = 0;
};

/// max_k |I_k - I_0| / (1 + |I_0|) per integral.
std::vector<DriftEntry> drift_report(const Trajectory& traj,
                                     const std::vector<ScalarField>& integrals);

struct LyapunovConfig {
  double T = 1000.0;
  double dt = 0.01;
  double renorm = 1.0;
  std::uint64_t seed = 0;
  double fd_step = 1e-6;
};

struct LyapunovResult {
  std::vector<double> exponents;  // descending
  std::vector<double> std_errors;
  double T = 0.0;
  double renorm = 0.0;
  std::uint64_t seed = 0;
  double mean_divergence = 0.0;  // time average of trace(J) along the orbit
};

/// Tangent-space RK4 with QR re-orthonormalization every `renorm` time units.
/// Uses X.jacobian when present, central differences otherwise.
/// Throws std::runtime_error when the frame collapses.
LyapunovResult lyapunov_spectrum(const VectorField& X, const State& s0, const LyapunovConfig& cfg);

/// Jacobian of X at s by central differences with step h (1 + |x_i|).
Mat jacobian_fd(const VectorField& X, const State& s, double h = 1e-6);

/// Empirical order from errors at dt0, dt0/2, ..., dt0/2^(levels-1), against
/// `exact` when given, else against a run with step dt0 / 2^(levels + 3).
/// Fixed-step methods only.
double convergence_order(const VectorField& X, const State& s0, double t_end, Method method,
                         double dt0, const std::optional<Vec>& exact = std::nullopt,
                         int levels = 4);

/// Header "t,<labels>,<integral names>" then rows formatted with %.17g.
void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& labels);

}  // namespace quadham
