#include "systems_internal.hpp"

namespace quadham {

namespace {

const CoordChart& chart() {
  static const CoordChart c("shivamoggi", {"u", "x", "y", "z"}, 0);
  return c;
}

ScalarField h1() {
  return make_field(
      "H1", 4,
      [](const State& s) {
        const double x = s.coords[1], z = s.coords[3];
        return x * x - z * z;
      },
      [](const State& s) { return detail::vec({0.0, 2.0 * s.coords[1], 0.0, -2.0 * s.coords[3]}); });
}

ScalarField h2() {
  return make_field(
      "H2", 4,
      [](const State& s) {
        const double u = s.coords[0], y = s.coords[2], z = s.coords[3];
        return z * z + u * u - y * y;
      },
      [](const State& s) {
        return detail::vec({2.0 * s.coords[0], 0.0, -2.0 * s.coords[2], 2.0 * s.coords[3]});
      });
}

ScalarField h3() {
  return make_field(
      "H3", 4, [](const State& s) { return s.coords[0] * (s.coords[3] + s.coords[1]); },
      [](const State& s) {
        const double u = s.coords[0], x = s.coords[1], z = s.coords[3];
        return detail::vec({z + x, u, 0.0, u});
      });
}

// -1 / (4 (x + z))
ScalarField conformal() {
  return make_field(
      "theta", 4, [](const State& s) { return -0.25 / (s.coords[1] + s.coords[3]); },
      [](const State& s) {
        const double w = s.coords[1] + s.coords[3];
        const double d = 0.25 / (w * w);
        return detail::vec({0.0, d, 0.0, d});
      },
      [](const State& s) { return std::abs(s.coords[1] + s.coords[3]) >= kMinDenominator; });
}

std::vector<DisplayedUV> displayed() {
  auto at = [](const State& s) {
    return std::array<double, 4>{s.coords[0], s.coords[1], s.coords[2], s.coords[3]};
  };
  std::vector<DisplayedUV> d;
  d.push_back({"N1", "Eq. (PoiShi)",
               [at](const State& s) {
                 auto [u, x, y, z] = at(s);
                 return Vec3(2.0 * u * Vec3(-y, z, y));
               },
               [at](const State& s) {
                 auto [u, x, y, z] = at(s);
                 return Vec3(2.0 * Vec3(u * u, y * (x + z), u * u - z * (x + z)));
               }});
  d.push_back({"N2", "Eq. (PoiShi)",
               [at](const State& s) {
                 auto [u, x, y, z] = at(s);
                 (void)y;
                 return Vec3(2.0 * (x + z) * Vec3(0.0, u, 0.0));
               },
               [at](const State& s) {
                 auto [u, x, y, z] = at(s);
                 (void)u;
                 (void)y;
                 return Vec3(x, 0.0, -z);
               }});
  d.push_back({"N3", "Eq. (PoiShi)",
               [at](const State& s) {
                 auto [u, x, y, z] = at(s);
                 (void)u;
                 return Vec3(-4.0 * Vec3(y * z, z * x, x * y));
               },
               [at](const State& s) {
                 auto [u, x, y, z] = at(s);
                 (void)y;
                 return Vec3(4.0 * u * Vec3(x, 0.0, -z));
               }});
  return d;
}

}  // namespace

namespace shivamoggi {

HamiltonianStructure extra_structure() {
  PoissonUV p;
  p.name = "N[H1-H2]";
  p.chart = chart();
  p.U = [](const State& s) { return Vec3(0.0, s.coords[2], 0.0); };
  p.V = [](const State& s) { return Vec3(-s.coords[1], 0.0, -2.0 * s.coords[0]); };
  p.dU = [](const State&) {
    Eigen::Matrix<double, 3, 4> j = Eigen::Matrix<double, 3, 4>::Zero();
    j(1, 2) = 1.0;
    return j;
  };
  p.dV = [](const State&) {
    Eigen::Matrix<double, 3, 4> j = Eigen::Matrix<double, 3, 4>::Zero();
    j(0, 1) = -1.0;
    j(2, 0) = -2.0;
    return j;
  };
  ScalarField H = linear_combination(1.0, h1(), -1.0, h2());
  H.name = "H1-H2";
  return {"extra", p, H, std::nullopt};
}

}  // namespace shivamoggi

namespace detail {

SystemDescriptor shivamoggi_descriptor() {
  SystemDescriptor d;
  d.name = "shivamoggi";
  d.anchor = "Eq. (SE), integrals (FISE), vectors (PoiShi)";
  d.chart = chart();
  d.default_state = vec({1.0, 2.0, 1.0, 1.0});
  d.build = [](const Params&) {
    SystemModel m;
    m.field = make_vector_field(
        "shivamoggi", 4,
        [](const State& s) {
          const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
          return vec({-u * y, z * y, z * x - u * u, x * y});
        },
        [](const State& s) {
          const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
          Mat j(4, 4);
          j << -y, 0.0, -u, 0.0,
               0.0, 0.0, z, y,
               -2.0 * u, z, 0.0, x,
               0.0, y, x, 0.0;
          return j;
        });
    const ScalarField H1 = h1(), H2 = h2(), H3 = h3();
    m.integrals = {{"H1", "Eq. (FISE)", H1}, {"H2", "Eq. (FISE)", H2}, {"H3", "Eq. (FISE)", H3}};
    const auto tri = tri_hamiltonian_set(H1, H2, H3, chart());
    const ScalarField theta = conformal();
    m.structures = {{"N1", tri[0], H1, theta}, {"N2", tri[1], H2, theta}, {"N3", tri[2], H3, theta}};
    m.displayed = displayed();
    m.sample_domain = [](const State& s) { return std::abs(s.coords[1] + s.coords[3]) > 0.1; };
    return m;
  };
  return d;
}

}  // namespace detail

}  // namespace quadham
