#pragma once

#include "quadham/core.hpp"
#include "quadham/jlm.hpp"
#include "quadham/poisson.hpp"

#include <json.hpp>

#include <map>

namespace quadham {

using Params = std::map<std::string, double>;

class UnknownSystemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Constraint {
  std::string description;
  std::function<bool(const Params&)> holds;
};

struct NamedField {
  std::string name;
  std::string anchor;
  ScalarField field;
};

struct DarbouxPair {
  std::string name;
  ScalarField polynomial;
  ScalarField cofactor;
};

/// A Poisson structure with the Hamiltonian it is paired with and the
/// conformal factor claimed to reproduce the system field.
struct HamiltonianStructure {
  std::string name;
  PoissonUV structure;
  ScalarField hamiltonian;
  std::optional<ScalarField> conformal;
};

/// U, V vectors as printed alongside a system, kept for comparison against
/// the constructed ones.
struct DisplayedUV {
  std::string name;
  std::string anchor;
  std::function<Vec3(const State&)> U;
  std::function<Vec3(const State&)> V;
};

struct SystemModel {
  VectorField field;
  std::vector<NamedField> integrals;
  // Claimed integrals whose conservation is measured rather than assumed.
  std::vector<NamedField> candidate_integrals;
  std::vector<DarbouxPair> darboux;
  std::vector<HamiltonianStructure> structures;
  std::vector<DisplayedUV> displayed;
  // Region used for residual sampling (in-domain for every field above).
  DomainPredicate sample_domain;
  SamplingOptions sampling;
};

struct SystemDescriptor {
  std::string name;
  std::string anchor;
  CoordChart chart;
  Params defaults;
  std::vector<Constraint> constraints;
  Vec default_state;
  std::function<SystemModel(const Params&)> build;
};

struct LevelValues {
  double kappa = 0.0;
  double tau = 0.0;
};

enum class Enforce { strict, none };

const std::vector<SystemDescriptor>& registry();
const SystemDescriptor& find_system(const std::string& name);

/// Defaults overlaid with `overrides`; unknown parameter names are rejected.
Params resolve_params(const SystemDescriptor& desc, const Params& overrides = {});
/// Throws ConstraintError naming the first violated constraint.
void check_constraints(const SystemDescriptor& desc, const Params& params);
SystemModel instantiate(const SystemDescriptor& desc, const Params& overrides = {},
                        Enforce enforce = Enforce::strict);

Vec eval_field(const std::string& name, const State& s, const Params& overrides = {});

nlohmann::json descriptor_json(const SystemDescriptor& desc, const Params& params);

// ---------------------------------------------------------------------------
// Transformations between systems.

enum class Direction { forward, inverse };

struct TransformSpec {
  std::string name;
  std::string anchor;
  std::string source;  // registry name, or a raw system described in `source_field`
  std::string target;  // registry name, empty for time-only maps
  Params defaults;
  std::function<VectorField(const Params&)> source_field;
  std::function<State(const State&, const Params&)> forward;
  std::function<State(const State&, const Params&)> inverse;
};

const std::vector<TransformSpec>& transforms();
const TransformSpec& find_transform(const std::string& name);
State apply_transform(const std::string& name, const State& s, Direction direction,
                      const Params& overrides = {});

/// Image of the source field under the transform, expressed in the target
/// time variable, computed by differentiating the map along the flow.
Vec pushforward(const TransformSpec& spec, const State& s, const Params& params,
                double h = 1e-5);

// ---------------------------------------------------------------------------
// Reductions to planar systems on common level sets of two integrals.

struct ReductionSpec {
  std::string name;
  std::string anchor;
  std::string ambient;
  int x_index = 0;
  int y_index = 0;
  /// Ambient coordinates for a planar point (x, y) on the level set.
  std::function<Vec(double x, double y, const LevelValues&, const Params&)> lift;
  std::function<void(const LevelValues&, const Params&)> validate;
  std::function<DomainPredicate(const LevelValues&)> domain;
  /// The planar system as printed, for term-level comparison.
  std::function<PlanarSystem(const LevelValues&, const Params&)> displayed;
};

const std::vector<ReductionSpec>& reductions();
const ReductionSpec& find_reduction(const std::string& name);

/// Planar system obtained by substituting the lift into the ambient field.
PlanarSystem reduce(const std::string& name, const LevelValues& lv,
                    const Params& overrides = {});

// ---------------------------------------------------------------------------
// System-specific data used by the verification suites.

ScalarField make_field(std::string name, int dim, std::function<double(const State&)> eval,
                       std::function<Vec(const State&)> grad,
                       DomainPredicate domain = {},
                       std::function<double(const State&)> dt = {});

namespace lorenz {
/// dx = sigma (y - x), dy = rho x - x z - y, dz = -beta z + x y.
VectorField raw_field(double sigma, double rho, double beta);

/// Printed matrices with the integrals they pair with: n1 * grad h2 and
/// n2 * grad h1 are both claimed to give the field.
struct DisplayedPair {
  MatrixField n1;
  MatrixField n2;
  ScalarField h1;
  ScalarField h2;
};
DisplayedPair displayed_pair(const std::string& system);
}  // namespace lorenz

namespace shivamoggi {
/// H = H1 - H2 with U = (0, y, 0), V = (-x, 0, -2u).
HamiltonianStructure extra_structure();
}  // namespace shivamoggi

namespace raychaudhuri {
/// Conformal factor reproducing the field for the constructed structures.
ScalarField fitted_conformal();
double mu(const LevelValues& lv);
MultiplierBundle reduced_bundle(const LevelValues& lv);

/// -(8 / (z u^3)) (l H2 H3 + m H1 H3 + n H1 H2) - 1.
double fourth_condition_residual(double l, double m, double n, const State& s);
/// n solving the printed condition for given l, m.
double fourth_condition_solve_n(double l, double m, const State& s);
/// Max norm of X - theta (l N1 + m N2 + n N3) grad H4.
double fourth_flow_residual(double l, double m, double n, const State& s);
}  // namespace raychaudhuri

namespace lu {
/// M, H (time-dependent), Q = arcsin(q / sqrt(tau)), P = p on the (p, q) chart.
MultiplierBundle reduced_bundle(const LevelValues& lv, const Params& params);
/// Conserved Hamiltonian of the autonomous reduction.
ScalarField autonomous_reduced_hamiltonian(const LevelValues& lv, const Params& params);
/// The canonical system as printed, on a (Q, P) chart.
PlanarSystem canonical_displayed(const LevelValues& lv, const Params& params);
/// The reduced system rewritten in (Q, P) by the canonical change of variables.
PlanarSystem canonical_pushforward(const LevelValues& lv, const Params& params);
ScalarField canonical_hamiltonian(const LevelValues& lv, const Params& params);
}  // namespace lu

namespace qi {
MultiplierBundle reduced_bundle(const LevelValues& lv, const Params& params);
PlanarSystem canonical_displayed(const LevelValues& lv, const Params& params);
PlanarSystem canonical_pushforward(const LevelValues& lv, const Params& params);
ScalarField canonical_hamiltonian(const LevelValues& lv, const Params& params);
/// Reduced system in the rescaled time, as printed and as derived. States
/// carry the rescaled time in `t`.
PlanarSystem rescaled_time_displayed(const LevelValues& lv, const Params& params);
PlanarSystem rescaled_time_derived(const LevelValues& lv, const Params& params);
}  // namespace qi

}  // namespace quadham
