#include "quadham/jlm.hpp"

namespace quadham {

namespace {

void require_planar(const PlanarSystem& sys, const State& s) {
  if (sys.chart.dim() != 2 || s.dim() != 2 || sys.f.dim != 2 || sys.g.dim != 2)
    throw DimensionError("planar system '" + sys.name + "' requires 2D fields and state");
}

// d_x(A f) + d_y(A g) by the product rule from the field gradients.
double flux_divergence(const ScalarField& A, const ScalarField& f, const ScalarField& g,
                       const State& s) {
  const Vec gA = A.gradient(s), gf = f.gradient(s), gg = g.gradient(s);
  const double a = A.value(s);
  return gA[0] * f.value(s) + a * gf[0] + gA[1] * g.value(s) + a * gg[1];
}

}  // namespace

VectorField PlanarSystem::as_vector_field() const {
  VectorField X;
  X.name = name;
  X.dim = 2;
  X.autonomous = autonomous;
  const ScalarField ff = f, gg = g;
  X.eval = [ff, gg](const State& s) {
    Vec v(2);
    v << ff.value(s), gg.value(s);
    return v;
  };
  X.domain = domain;
  return X;
}

double multiplier_pde_residual(const PlanarSystem& sys, const ScalarField& M, const State& s) {
  require_planar(sys, s);
  if (!M.contains(s) || !sys.contains(s))
    throw DomainError("multiplier_pde_residual: state outside domain");
  return M.time_partial(s) + flux_divergence(M, sys.f, sys.g, s);
}

PlanarResidual hamiltonian_consistency(const PlanarSystem& sys, const ScalarField& M,
                                       const ScalarField& H, const State& s) {
  require_planar(sys, s);
  const Vec gH = H.gradient(s);
  const double m = M.value(s);
  return {gH[0] + m * sys.g.value(s), gH[1] - m * sys.f.value(s)};
}

double aux_condition_residual(const PlanarSystem& sys, const ScalarField& M,
                              const ScalarField& psi, const ScalarField& phi,
                              const State& s) {
  require_planar(sys, s);
  const ScalarField f_rel = linear_combination(1.0, sys.f, -1.0, psi);
  const ScalarField g_rel = linear_combination(1.0, sys.g, -1.0, phi);
  return flux_divergence(M, f_rel, g_rel, s);
}

PlanarResidual timedep_hamiltonian_consistency(const PlanarSystem& sys, const ScalarField& M,
                                               const ScalarField& psi, const ScalarField& phi,
                                               const ScalarField& H, const State& s) {
  require_planar(sys, s);
  const Vec gH = H.gradient(s);
  const double m = M.value(s);
  return {gH[0] + m * (sys.g.value(s) - phi.value(s)),
          gH[1] - m * (sys.f.value(s) - psi.value(s))};
}

double canonical_jacobian_check(const ScalarField& M, const ScalarField& Q,
                                const ScalarField& P, const State& s) {
  const Vec gQ = Q.gradient(s), gP = P.gradient(s);
  return gQ[0] * gP[1] - gQ[1] * gP[0] - M.value(s);
}

double total_minus_partial_time_derivative(const PlanarSystem& sys, const ScalarField& H,
                                           const State& s) {
  require_planar(sys, s);
  const Vec gH = H.gradient(s);
  return gH[0] * sys.f.value(s) + gH[1] * sys.g.value(s);
}

PlanarResidual hamilton_equations_residual(const PlanarSystem& canonical, const ScalarField& H,
                                           const State& s) {
  require_planar(canonical, s);
  const Vec gH = H.gradient(s);
  return {canonical.f.value(s) - gH[1], canonical.g.value(s) + gH[0]};
}

}  // namespace quadham
