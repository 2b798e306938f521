#include "quadham/poisson.hpp"

#include <cmath>

namespace quadham {

namespace {

DomainPredicate both(const DomainPredicate& a, const DomainPredicate& b) {
  if (!a) return b;
  if (!b) return a;
  return [a, b](const State& s) { return a(s) && b(s); };
}

// Chart index of block position a (block position 0 is the distinguished
// coordinate).
std::array<int, 4> block_order(const CoordChart& chart) {
  const auto sp = chart.spatial_indices();
  return {*chart.distinguished(), sp[0], sp[1], sp[2]};
}

Vec3 spatial(const Vec& g, const CoordChart& chart) {
  const auto sp = chart.spatial_indices();
  return {g[sp[0]], g[sp[1]], g[sp[2]]};
}

double du(const Vec& g, const CoordChart& chart) { return g[*chart.distinguished()]; }

Mat4 to_chart_order(const Mat4& block, const CoordChart& chart) {
  const auto order = block_order(chart);
  Mat4 n;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) n(order[a], order[b]) = block(a, b);
  return n;
}

void require_4d(const PoissonUV& p, const State& s) {
  if (p.chart.dim() != 4 || s.dim() != 4)
    throw DimensionError("PoissonUV '" + p.name + "' requires a 4D chart and state");
}

}  // namespace

MatrixField scaled(const MatrixField& n, const ScalarField& factor) {
  MatrixField out;
  out.name = factor.name + "*" + n.name;
  out.dim = n.dim;
  out.eval = [n, factor](const State& s) { return Mat(factor.value(s) * n(s)); };
  out.domain = both(n.domain, factor.domain);
  return out;
}

MatrixField pencil(const MatrixField& a, double c, const MatrixField& b) {
  if (a.dim != b.dim) throw DimensionError("pencil: dimension mismatch");
  MatrixField out;
  out.name = a.name + "+c*" + b.name;
  out.dim = a.dim;
  out.eval = [a, b, c](const State& s) { return Mat(a(s) + c * b(s)); };
  out.domain = both(a.domain, b.domain);
  return out;
}

Mat4 assemble_matrix(const PoissonUV& p, const State& s) {
  require_4d(p, s);
  return to_chart_order(assemble_matrix<double>(p.U(s), p.V(s)), p.chart);
}

MatrixField as_matrix_field(const PoissonUV& p) {
  MatrixField out;
  out.name = p.name;
  out.dim = 4;
  out.eval = [p](const State& s) { return Mat(assemble_matrix(p, s)); };
  out.domain = p.domain;
  return out;
}

PoissonUV pencil(const PoissonUV& a, double c, const PoissonUV& b) {
  if (!(a.chart == b.chart)) throw DimensionError("pencil: chart mismatch");
  PoissonUV out;
  out.name = a.name + "+c*" + b.name;
  out.chart = a.chart;
  out.U = [a, b, c](const State& s) { return Vec3(a.U(s) + c * b.U(s)); };
  out.V = [a, b, c](const State& s) { return Vec3(a.V(s) + c * b.V(s)); };
  out.domain = both(a.domain, b.domain);
  return out;
}

PoissonUV scaled(const PoissonUV& p, const ScalarField& theta) {
  PoissonUV out;
  out.name = theta.name + "*" + p.name;
  out.chart = p.chart;
  out.U = [p, theta](const State& s) { return Vec3(theta.value(s) * p.U(s)); };
  out.V = [p, theta](const State& s) { return Vec3(theta.value(s) * p.V(s)); };
  out.domain = both(p.domain, theta.domain);
  return out;
}

PoissonUV corrupted(const PoissonUV& p, int v_component) {
  PoissonUV out = p;
  out.name = p.name + "[corrupted V" + std::to_string(v_component + 1) + "]";
  out.dU = nullptr;
  out.dV = nullptr;
  out.V = [p, v_component](const State& s) {
    Vec3 v = p.V(s);
    v[v_component] = -v[v_component];
    return v;
  };
  return out;
}

double bracket(const MatrixField& N, const ScalarField& F, const ScalarField& G,
               const State& s) {
  if (N.dim != F.dim || N.dim != G.dim || s.dim() != N.dim)
    throw DimensionError("bracket: chart mismatch between " + N.name + ", " + F.name +
                         ", " + G.name);
  return F.gradient(s).dot(N(s) * G.gradient(s));
}

std::vector<double> jacobi_components_bruteforce(const MatrixField& N, const State& s,
                                                 double h) {
  const int n = N.dim;
  if (s.dim() != n) throw DimensionError("jacobi_residual_bruteforce: dimension mismatch");
  std::vector<double> out;
  if (n < 3) return out;
  const Mat value = N(s);
  std::vector<Mat> partial(n);
  for (int a = 0; a < n; ++a) partial[a] = richardson_partial(N.eval, s, a, h, N.domain);
  // J^{bcd} = sum_a N^{ab} d_a N^{cd} + N^{ac} d_a N^{db} + N^{ad} d_a N^{bc}
  for (int b = 0; b < n; ++b)
    for (int c = b + 1; c < n; ++c)
      for (int d = c + 1; d < n; ++d) {
        double j = 0.0;
        for (int a = 0; a < n; ++a)
          j += value(a, b) * partial[a](c, d) + value(a, c) * partial[a](d, b) +
               value(a, d) * partial[a](b, c);
        out.push_back(j);
      }
  return out;
}

double jacobi_residual_bruteforce(const MatrixField& N, const State& s, double h) {
  double m = 0.0;
  for (double j : jacobi_components_bruteforce(N, s, h)) m = std::max(m, std::abs(j));
  return m;
}

UVJacobiResidual jacobi_residual_uv(const PoissonUV& p, const State& s, double h) {
  require_4d(p, s);
  using Jac = Eigen::Matrix<double, 3, 4>;
  auto fd_jacobian = [&](const std::function<Vec3(const State&)>& f) {
    auto as_vec = [&f](const State& q) { return Vec(f(q)); };
    Jac j;
    for (int a = 0; a < 4; ++a) j.col(a) = richardson_partial(as_vec, s, a, h, p.domain);
    return j;
  };
  const Jac jU = p.dU ? p.dU(s) : fd_jacobian(p.U);
  const Jac jV = p.dV ? p.dV(s) : fd_jacobian(p.V);

  const auto order = block_order(p.chart);
  // Reorder columns to (u, x, y, z).
  Eigen::Matrix<double, 3, 4> dU, dV;
  for (int a = 0; a < 4; ++a) {
    dU.col(a) = jU.col(order[a]);
    dV.col(a) = jV.col(order[a]);
  }
  const Vec3 U = p.U(s), V = p.V(s);
  const Vec3 du_U = dU.col(0);
  const Eigen::Matrix3d gU = dU.rightCols<3>();  // gU(i, k) = d_k U^i
  const Eigen::Matrix3d gV = dV.rightCols<3>();
  const Vec3 curl_V(gV(2, 1) - gV(1, 2), gV(0, 2) - gV(2, 0), gV(1, 0) - gV(0, 1));
  const double div_U = gU.trace();
  const double du_UV = du_U.dot(V) + U.dot(dV.col(0));
  const Vec3 grad_UV = gU.transpose() * V + gV.transpose() * U;
  const Vec3 w = du_U - curl_V;

  UVJacobiResidual r;
  r.scalar = du_UV - V.dot(w);
  r.vector = grad_UV - V * div_U + U.cross(w);
  return r;
}

double degeneracy(const PoissonUV& p, const State& s) { return p.U(s).dot(p.V(s)); }

PoissonUV build_uv_from_pair(const ScalarField& ha, const ScalarField& hb,
                             const CoordChart& chart) {
  if (ha.dim != 4 || hb.dim != 4 || chart.dim() != 4)
    throw DimensionError("build_uv_from_pair: fields must share a 4D chart");
  chart.spatial_indices();  // throws without a (u, x) split
  PoissonUV p;
  p.name = "N[" + ha.name + "," + hb.name + "]";
  p.chart = chart;
  p.U = [ha, hb, chart](const State& s) {
    return Vec3(spatial(ha.gradient(s), chart).cross(spatial(hb.gradient(s), chart)));
  };
  p.V = [ha, hb, chart](const State& s) {
    const Vec ga = ha.gradient(s), gb = hb.gradient(s);
    return Vec3(du(ga, chart) * spatial(gb, chart) - du(gb, chart) * spatial(ga, chart));
  };
  p.domain = both(ha.domain, hb.domain);
  return p;
}

std::array<PoissonUV, 3> tri_hamiltonian_set(const ScalarField& h1, const ScalarField& h2,
                                             const ScalarField& h3, const CoordChart& chart) {
  auto n1 = build_uv_from_pair(h2, h3, chart);
  auto n2 = build_uv_from_pair(h3, h1, chart);
  auto n3 = build_uv_from_pair(h1, h2, chart);
  n1.name = "N1";
  n2.name = "N2";
  n3.name = "N3";
  return {n1, n2, n3};
}

Vec hamiltonian_vector_field(const PoissonUV& p, const ScalarField& H, const State& s) {
  return assemble_matrix(p, s) * H.gradient(s);
}

Vec expanded_hamiltonian_field(const ScalarField& h1, const ScalarField& h2,
                               const ScalarField& H, const CoordChart& chart,
                               const State& s) {
  const Vec g1 = h1.gradient(s), g2 = h2.gradient(s), g = H.gradient(s);
  const Vec3 n1 = spatial(g1, chart), n2 = spatial(g2, chart), n = spatial(g, chart);
  const Vec3 c12 = n1.cross(n2);
  const double u_dot = -c12.dot(n);
  const Vec3 x_dot = c12 * du(g, chart) + n2.cross(n) * du(g1, chart) +
                     n.cross(n1) * du(g2, chart);
  Vec out(4);
  out[*chart.distinguished()] = u_dot;
  const auto sp = chart.spatial_indices();
  for (int i = 0; i < 3; ++i) out[sp[i]] = x_dot[i];
  return out;
}

double casimir_residual(const PoissonUV& p, const ScalarField& C, const State& s) {
  return (assemble_matrix(p, s) * C.gradient(s)).cwiseAbs().maxCoeff();
}

double compatibility_lambda(const PoissonUV& pi, const PoissonUV& pj, const State& s) {
  return compatibility_lambda<double>(pi.U(s), pi.V(s), pj.U(s), pj.V(s));
}

double conformal_match(const VectorField& X, const PoissonUV& p, const ScalarField& H,
                       const ScalarField& theta, const State& s) {
  const Vec rhs = theta.value(s) * hamiltonian_vector_field(p, H, s);
  return (X(s) - rhs).cwiseAbs().maxCoeff();
}

Mat4 compact_structure(const std::array<ScalarField, 3>& h, int i, const State& s) {
  if (i < 0 || i > 2) throw std::invalid_argument("compact_structure: index must be 0..2");
  const int j = (i + 1) % 3, k = (i + 2) % 3;
  // eps^{ijk} = +1 for the cyclic successor order; the (k, j) term has the
  // opposite sign and equal value, so one unordered pair carries the sum.
  const Vec gj = h[j].gradient(s), gk = h[k].gradient(s);
  Mat4 n = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const int e = levi_civita4(a, b, c, d);
          if (e != 0) n(a, b) -= e * gj[c] * gk[d];
        }
  return n;
}

ThreeDPair build_3d_pair(const ScalarField& h1, const ScalarField& h2) {
  if (h1.dim != 3 || h2.dim != 3) throw DimensionError("build_3d_pair: 3D chart required");
  ThreeDPair pair;
  pair.from_h2.name = "N[-eps dH2]";
  pair.from_h2.dim = 3;
  pair.from_h2.eval = [h2](const State& s) {
    return Mat(levi_civita_matrix<double>(Vec3(h2.gradient(s)), -1.0));
  };
  pair.from_h2.domain = h2.domain;
  pair.from_h1.name = "N[+eps dH1]";
  pair.from_h1.dim = 3;
  pair.from_h1.eval = [h1](const State& s) {
    return Mat(levi_civita_matrix<double>(Vec3(h1.gradient(s)), 1.0));
  };
  pair.from_h1.domain = h1.domain;
  return pair;
}

Vec3 nambu_field(const ScalarField& h1, const ScalarField& h2, const State& s) {
  if (h1.dim != 3 || h2.dim != 3 || s.dim() != 3)
    throw DimensionError("nambu_field: 3D chart required");
  return Vec3(h1.gradient(s)).cross(Vec3(h2.gradient(s)));
}

}  // namespace quadham
