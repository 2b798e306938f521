#pragma once

#include "quadham/algebra.hpp"
#include "quadham/core.hpp"

#include <array>
#include <utility>

namespace quadham {

/// Antisymmetric matrix-valued field of any dimension 2..4.
struct MatrixField {
  std::string name;
  int dim = 0;
  std::function<Mat(const State&)> eval;
  DomainPredicate domain;

  Mat operator()(const State& s) const { return eval(s); }
  bool contains(const State& s) const { return !domain || domain(s); }
};

MatrixField scaled(const MatrixField& n, const ScalarField& factor);
MatrixField pencil(const MatrixField& a, double c, const MatrixField& b);

/// Degenerate 4D Poisson structure in the (U, V) block parametrization.
/// Optional analytic Jacobians dU, dV are 3x4 matrices with columns ordered
/// as the chart coordinates.
struct PoissonUV {
  std::string name;
  CoordChart chart;
  std::function<Vec3(const State&)> U;
  std::function<Vec3(const State&)> V;
  std::function<Eigen::Matrix<double, 3, 4>(const State&)> dU;
  std::function<Eigen::Matrix<double, 3, 4>(const State&)> dV;
  DomainPredicate domain;

  bool contains(const State& s) const { return !domain || domain(s); }
};

/// N in chart order. The block form is built with the distinguished
/// coordinate first and then permuted into the chart's coordinate order.
Mat4 assemble_matrix(const PoissonUV& p, const State& s);
MatrixField as_matrix_field(const PoissonUV& p);

/// (U + c U', V + c V').
PoissonUV pencil(const PoissonUV& a, double c, const PoissonUV& b);
/// (theta U, theta V).
PoissonUV scaled(const PoissonUV& p, const ScalarField& theta);
/// Flips the sign of one component of V.
PoissonUV corrupted(const PoissonUV& p, int v_component = 0);

/// {F, G} = grad F . N grad G over all coordinates.
double bracket(const MatrixField& N, const ScalarField& F, const ScalarField& G,
               const State& s);

/// Max absolute component of N^{a[b} d_a N^{cd]} over all b < c < d, with the
/// partials of N taken by finite differences. Zero components in 2D.
double jacobi_residual_bruteforce(const MatrixField& N, const State& s,
                                  double h = kDefaultFdStep);
/// All antisymmetrized components in lexicographic (b, c, d) order.
std::vector<double> jacobi_components_bruteforce(const MatrixField& N, const State& s,
                                                 double h = kDefaultFdStep);

struct UVJacobiResidual {
  double scalar = 0.0;
  Vec3 vector = Vec3::Zero();
  double max_abs() const { return std::max(std::abs(scalar), vector.cwiseAbs().maxCoeff()); }
};

/// Scalar and vector Jacobi conditions in (U, V) form:
///   d_u(U.V) - V.(d_u U - curl V)
///   grad(U.V) - V div U + U x (d_u U - curl V)
/// Uses p.dU / p.dV when present, finite differences otherwise.
UVJacobiResidual jacobi_residual_uv(const PoissonUV& p, const State& s,
                                    double h = kDefaultFdStep);

/// U . V
double degeneracy(const PoissonUV& p, const State& s);

/// U = grad Ha x grad Hb, V = du Ha grad Hb - du Hb grad Ha.
PoissonUV build_uv_from_pair(const ScalarField& ha, const ScalarField& hb,
                             const CoordChart& chart);

/// Cyclic construction: N(1) from (H2, H3), N(2) from (H3, H1), N(3) from (H1, H2).
std::array<PoissonUV, 3> tri_hamiltonian_set(const ScalarField& h1, const ScalarField& h2,
                                             const ScalarField& h3, const CoordChart& chart);

/// N grad H.
Vec hamiltonian_vector_field(const PoissonUV& p, const ScalarField& H, const State& s);

/// Hamilton's equations for N built from (H1, H2), written out with cross
/// products:
///   du/dt = -(grad H1 x grad H2) . grad H
///   dx/dt = (grad H1 x grad H2) du H + (grad H2 x grad H) du H1
///           + (grad H x grad H1) du H2
/// Returned in chart order.
Vec expanded_hamiltonian_field(const ScalarField& h1, const ScalarField& h2,
                               const ScalarField& H, const CoordChart& chart,
                               const State& s);

/// Max norm of N grad C.
double casimir_residual(const PoissonUV& p, const ScalarField& C, const State& s);

double compatibility_lambda(const PoissonUV& pi, const PoissonUV& pj, const State& s);

/// Max norm of X - theta * N grad H.
double conformal_match(const VectorField& X, const PoissonUV& p, const ScalarField& H,
                       const ScalarField& theta, const State& s);

/// Structure i of the compact epsilon form, with the sum over (j, k) taken
/// once per unordered pair:  N(i)^{ab} = -eps^{ijk} eps^{abcd} d_c H_j d_d H_k, j < k.
Mat4 compact_structure(const std::array<ScalarField, 3>& h, int i, const State& s);

/// Pair of 3D structures from two Hamiltonians, N_ab = -eps^{ij} eps^{abc} d_c H_j:
///   from_h2 = -eps d H2 (the i = 1 matrix), applied to grad H1;
///   from_h1 = +eps d H1 (the i = 2 matrix), applied to grad H2.
/// Both products equal grad H2 x grad H1.
struct ThreeDPair {
  MatrixField from_h2;
  MatrixField from_h1;
};
ThreeDPair build_3d_pair(const ScalarField& h1, const ScalarField& h2);

/// grad H1 x grad H2 in a 3D chart.
Vec3 nambu_field(const ScalarField& h1, const ScalarField& h2, const State& s);

}  // namespace quadham
