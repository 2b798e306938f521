#pragma once

#include "quadham/core.hpp"

#include <optional>
#include <utility>

namespace quadham {

/// dx/dt = f(x, y, t), dy/dt = g(x, y, t) on a 2D chart ordered (x-like, y-like).
struct PlanarSystem {
  std::string name;
  CoordChart chart;
  ScalarField f;
  ScalarField g;
  bool autonomous = true;
  DomainPredicate domain;

  VectorField as_vector_field() const;
  bool contains(const State& s) const {
    return (!domain || domain(s)) && f.contains(s) && g.contains(s);
  }
};

/// Multiplier, optional auxiliary functions, Hamiltonian and canonical pair.
struct MultiplierBundle {
  ScalarField M;
  std::optional<ScalarField> psi;
  std::optional<ScalarField> phi;
  ScalarField H;
  std::optional<ScalarField> Q;
  std::optional<ScalarField> P;
};

/// d_t M + d_x(M f) + d_y(M g)
double multiplier_pde_residual(const PlanarSystem& sys, const ScalarField& M, const State& s);

struct PlanarResidual {
  double x = 0.0;
  double y = 0.0;
  double max_abs() const { return std::max(std::abs(x), std::abs(y)); }
};

/// (d_x H + M g, d_y H - M f): zero iff M (f dy - g dx) = dH at s.
PlanarResidual hamiltonian_consistency(const PlanarSystem& sys, const ScalarField& M,
                                       const ScalarField& H, const State& s);

/// d_x(M (f - psi)) + d_y(M (g - phi))
double aux_condition_residual(const PlanarSystem& sys, const ScalarField& M,
                              const ScalarField& psi, const ScalarField& phi,
                              const State& s);

/// (d_x H + M (g - phi), d_y H - M (f - psi)). The dt component of the
/// time-dependent relation is left unconstrained.
PlanarResidual timedep_hamiltonian_consistency(const PlanarSystem& sys, const ScalarField& M,
                                               const ScalarField& psi, const ScalarField& phi,
                                               const ScalarField& H, const State& s);

/// det d(Q, P)/d(x, y) - M.
double canonical_jacobian_check(const ScalarField& M, const ScalarField& Q,
                                const ScalarField& P, const State& s);

/// dH/dt along the flow minus the explicit partial d_t H.
double total_minus_partial_time_derivative(const PlanarSystem& sys, const ScalarField& H,
                                           const State& s);

/// Residuals of Hamilton's equations dQ/dt = d_P H, dP/dt = -d_Q H for a
/// planar system already written in canonical (Q, P) coordinates.
PlanarResidual hamilton_equations_residual(const PlanarSystem& canonical, const ScalarField& H,
                                           const State& s);

}  // namespace quadham
