#pragma once

#include "quadham/systems.hpp"

#include <cmath>

namespace quadham::detail {

std::vector<SystemDescriptor> lorenz_descriptors();
std::vector<TransformSpec> lorenz_transforms();

SystemDescriptor shivamoggi_descriptor();

SystemDescriptor raychaudhuri_descriptor();
ReductionSpec raychaudhuri_reduction();

std::vector<SystemDescriptor> lu_descriptors();
std::vector<TransformSpec> lu_transforms();
std::vector<ReductionSpec> lu_reductions();

std::vector<SystemDescriptor> qi_descriptors();
std::vector<TransformSpec> qi_transforms();
ReductionSpec qi_reduction();

inline Vec vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline VectorField make_vector_field(std::string name, int dim,
                                     std::function<Vec(const State&)> eval,
                                     std::function<Mat(const State&)> jacobian = {},
                                     bool autonomous = true) {
  VectorField X;
  X.name = std::move(name);
  X.dim = dim;
  X.eval = std::move(eval);
  X.jacobian = std::move(jacobian);
  X.autonomous = autonomous;
  return X;
}

inline bool nearly(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)); }

inline double param(const Params& p, const char* key) { return p.at(key); }

// Guard for sqrt(tau - q^2) on reduced level sets.
inline constexpr double kLevelMargin = 1e-6;

inline DomainPredicate sqrt_guard(double tau, int q_index) {
  return [tau, q_index](const State& s) {
    const double q = s.coords[q_index];
    return tau - q * q > kLevelMargin;
  };
}

inline ScalarField constant(int dim, double c) { return constant_field(dim, c); }

}  // namespace quadham::detail
