#pragma once

// Pointwise algebra of the (U, V) block parametrization of 4x4 antisymmetric
// matrices and of 3D cross-product structures. Everything here is templated on
// the scalar type so the same kernels serve double evaluation and any
// higher-precision checks.

#include <Eigen/Dense>

namespace quadham {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

/// Hodge map v -> [v]_x, the matrix with hat(v) * w = v x w.
template <typename Scalar>
Matrix3<Scalar> hat(const Vector3<Scalar>& v) {
  Matrix3<Scalar> m;
  m << Scalar(0), -v.z(), v.y(),
       v.z(), Scalar(0), -v.x(),
       -v.y(), v.x(), Scalar(0);
  return m;
}

/// Block matrix with row/column 0 the distinguished coordinate:
///   N[0][i] = -U^i, N[i][0] = U^i, lower block = hat(V).
template <typename Scalar>
Matrix4<Scalar> assemble_matrix(const Vector3<Scalar>& U, const Vector3<Scalar>& V) {
  Matrix4<Scalar> n = Matrix4<Scalar>::Zero();
  n.template block<1, 3>(0, 1) = -U.transpose();
  n.template block<3, 1>(1, 0) = U;
  n.template block<3, 3>(1, 1) = hat(V);
  return n;
}

/// Inverse of assemble_matrix for an antisymmetric matrix.
template <typename Scalar>
void split_matrix(const Matrix4<Scalar>& n, Vector3<Scalar>& U, Vector3<Scalar>& V) {
  U = n.template block<3, 1>(1, 0);
  V << n(3, 2), n(1, 3), n(2, 1);
}

/// U = grad_a x grad_b, V = du_a grad_b - du_b grad_a.
template <typename Scalar>
void uv_from_gradients(Scalar du_a, const Vector3<Scalar>& grad_a, Scalar du_b,
                       const Vector3<Scalar>& grad_b, Vector3<Scalar>& U,
                       Vector3<Scalar>& V) {
  U = grad_a.cross(grad_b);
  V = du_a * grad_b - du_b * grad_a;
}

/// U_i . V_j + U_j . V_i
template <typename Scalar>
Scalar compatibility_lambda(const Vector3<Scalar>& Ui, const Vector3<Scalar>& Vi,
                            const Vector3<Scalar>& Uj, const Vector3<Scalar>& Vj) {
  return Ui.dot(Vj) + Uj.dot(Vi);
}

/// 3x3 antisymmetric matrix N_ab = sign * eps_abc * g_c.
template <typename Scalar>
Matrix3<Scalar> levi_civita_matrix(const Vector3<Scalar>& g, Scalar sign) {
  return -sign * hat(g);
}

/// Totally antisymmetric symbol in four indices.
inline int levi_civita4(int a, int b, int c, int d) {
  const int p[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

}  // namespace quadham
