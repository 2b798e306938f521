#include "systems_internal.hpp"

namespace quadham {

namespace {

const CoordChart& chart() {
  static const CoordChart c("raychaudhuri", {"u", "x", "y", "z"}, 0);
  return c;
}

bool away(double v) { return std::abs(v) >= kMinDenominator; }

// y^2 + z^2 - u^2 - x^2 / 4
double j4(const State& s) {
  const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
  return y * y + z * z - u * u - 0.25 * x * x;
}

Vec j4_grad(const State& s) {
  return detail::vec({-2.0 * s.coords[0], -0.5 * s.coords[1], 2.0 * s.coords[2], 2.0 * s.coords[3]});
}

ScalarField coordinate(const char* name, int index) {
  return make_field(name, 4, [index](const State& s) { return s.coords[index]; },
                    [index](const State&) {
                      Vec g = Vec::Zero(4);
                      g[index] = 1.0;
                      return g;
                    });
}

ScalarField j4_field() { return make_field("J4", 4, j4, j4_grad); }

ScalarField cofactor() {
  return make_field("-x", 4, [](const State& s) { return -s.coords[1]; },
                    [](const State&) { return detail::vec({0.0, -1.0, 0.0, 0.0}); });
}

ScalarField h1() {
  return make_field(
      "H1", 4, [](const State& s) { return s.coords[3] / s.coords[0]; },
      [](const State& s) {
        const double u = s.coords[0], z = s.coords[3];
        return detail::vec({-z / (u * u), 0.0, 0.0, 1.0 / u});
      },
      [](const State& s) { return away(s.coords[0]); });
}

ScalarField h2() {
  return make_field(
      "H2", 4, [](const State& s) { return s.coords[2] / s.coords[3]; },
      [](const State& s) {
        const double y = s.coords[2], z = s.coords[3];
        return detail::vec({0.0, 0.0, 1.0 / z, -y / (z * z)});
      },
      [](const State& s) { return away(s.coords[3]); });
}

// J4 divided by coordinate `index`.
ScalarField j4_over(const char* name, int index) {
  return make_field(
      name, 4, [index](const State& s) { return j4(s) / s.coords[index]; },
      [index](const State& s) {
        const double c = s.coords[index];
        Vec g = j4_grad(s) / c;
        g[index] -= j4(s) / (c * c);
        return g;
      },
      [index](const State& s) { return away(s.coords[index]); });
}

ScalarField paper_conformal() {
  return make_field(
      "theta", 4,
      [](const State& s) {
        const double u = s.coords[0], z = s.coords[3];
        return -0.5 * z * u * u * u;
      },
      [](const State& s) {
        const double u = s.coords[0], z = s.coords[3];
        return detail::vec({-1.5 * z * u * u, 0.0, 0.0, -0.5 * u * u * u});
      });
}

std::vector<DisplayedUV> displayed() {
  std::vector<DisplayedUV> d;
  d.push_back({"N1", "Sec. 3.2 vector list",
               [](const State& s) {
                 const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
                 return Vec3(-2.0 / (u * z * z) * Vec3(4.0 * (y * y + z * z), x * y, x * z));
               },
               [](const State& s) {
                 const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
                 const double k = y * y + z * z + u * u - 0.25 * x * x;
                 return Vec3(4.0 / (z * z) * k * Vec3(0.0, -z, y));
               }});
  d.push_back({"N2", "Sec. 3.2 vector list",
               [](const State& s) {
                 const double u = s.coords[0], x = s.coords[1], y = s.coords[2];
                 return Vec3(-2.0 / (u * u) * Vec3(4.0 * y, x, 0.0));
               },
               [](const State& s) {
                 const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
                 const double k = y * y + z * z + u * u - 0.25 * x * x;
                 const double u3 = u * u * u;
                 return Vec3(2.0 / u3 * Vec3(x * z, -4.0 * y * z, 2.0 * u3 * k - 4.0 * z * z));
               }});
  d.push_back({"N3", "Sec. 3.2 vector list",
               [](const State& s) {
                 const double u = s.coords[0], z = s.coords[3];
                 return Vec3(-1.0 / (u * z), 0.0, 0.0);
               },
               [](const State& s) {
                 const double u = s.coords[0], y = s.coords[2], z = s.coords[3];
                 return Vec3(1.0 / (z * u * u) * Vec3(0.0, -z, y));
               }});
  return d;
}

VectorField field() {
  return detail::make_vector_field(
      "raychaudhuri", 4,
      [](const State& s) {
        const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
        return detail::vec({-x * u, -(0.5 * x * x + 2.0 * (y * y + z * z - u * u)), -x * y, -x * z});
      },
      [](const State& s) {
        const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
        Mat j(4, 4);
        j << -x, -u, 0.0, 0.0,
             4.0 * u, -x, -4.0 * y, -4.0 * z,
             0.0, -y, -x, 0.0,
             0.0, -z, 0.0, -x;
        return j;
      });
}

}  // namespace

namespace raychaudhuri {

ScalarField fitted_conformal() {
  return make_field(
      "theta_fit", 4,
      [](const State& s) {
        const double u = s.coords[0], z = s.coords[3];
        return 2.0 * z * u * u * u;
      },
      [](const State& s) {
        const double u = s.coords[0], z = s.coords[3];
        return detail::vec({6.0 * z * u * u, 0.0, 0.0, 2.0 * u * u * u});
      });
}

double mu(const LevelValues& lv) {
  if (lv.kappa == 0.0) throw std::invalid_argument("raychaudhuri reduction requires kappa != 0");
  return 2.0 / (lv.kappa * lv.kappa) - 2.0 * lv.tau * lv.tau - 2.0;
}

MultiplierBundle reduced_bundle(const LevelValues& lv) {
  const double m = mu(lv);
  auto z_away = [](const State& s) { return away(s.coords[1]); };
  MultiplierBundle b;
  b.M = make_field(
      "M", 2, [](const State& s) { return 1.0 / (s.coords[1] * s.coords[1]); },
      [](const State& s) {
        const double z = s.coords[1];
        return detail::vec({0.0, -2.0 / (z * z * z)});
      },
      z_away);
  b.H = make_field(
      "H", 2,
      [m](const State& s) {
        const double x = s.coords[0], z = s.coords[1];
        return x * x / (2.0 * z) + m * z;
      },
      [m](const State& s) {
        const double x = s.coords[0], z = s.coords[1];
        return detail::vec({x / z, -x * x / (2.0 * z * z) + m});
      },
      z_away);
  b.Q = make_field("Q", 2, [](const State& s) { return s.coords[0]; },
                   [](const State&) { return detail::vec({1.0, 0.0}); });
  b.P = make_field(
      "P", 2, [](const State& s) { return -1.0 / s.coords[1]; },
      [](const State& s) {
        const double z = s.coords[1];
        return detail::vec({0.0, 1.0 / (z * z)});
      },
      z_away);
  return b;
}

double fourth_condition_residual(double l, double m, double n, const State& s) {
  const double u = s.coords[0], z = s.coords[3];
  const double H1 = h1().value(s), H2 = h2().value(s), H3 = j4_over("H3", 0).value(s);
  return -(8.0 / (z * u * u * u)) * (l * H2 * H3 + m * H1 * H3 + n * H1 * H2) - 1.0;
}

double fourth_condition_solve_n(double l, double m, const State& s) {
  const double u = s.coords[0], z = s.coords[3];
  const double H1 = h1().value(s), H2 = h2().value(s), H3 = j4_over("H3", 0).value(s);
  return (-z * u * u * u / 8.0 - l * H2 * H3 - m * H1 * H3) / (H1 * H2);
}

double fourth_flow_residual(double l, double m, double n, const State& s) {
  const auto tri = tri_hamiltonian_set(h1(), h2(), j4_over("H3", 0), chart());
  const Mat4 N = l * assemble_matrix(tri[0], s) + m * assemble_matrix(tri[1], s) +
                 n * assemble_matrix(tri[2], s);
  const Vec rhs = paper_conformal().value(s) * (N * j4_over("H4", 2).gradient(s));
  return (field()(s) - rhs).cwiseAbs().maxCoeff();
}

}  // namespace raychaudhuri

namespace detail {

SystemDescriptor raychaudhuri_descriptor() {
  SystemDescriptor d;
  d.name = "raychaudhuri";
  d.anchor = "Eq. (RE), integrals (FIRE)";
  d.chart = chart();
  d.default_state = vec({1.0, 0.5, 0.5, 0.5});
  d.build = [](const Params&) {
    SystemModel m;
    m.field = field();
    const ScalarField H1 = h1(), H2 = h2(), H3 = j4_over("H3", 0), H4 = j4_over("H4", 2);
    m.integrals = {{"H1", "Eq. (FIRE)", H1},
                   {"H2", "Eq. (FIRE)", H2},
                   {"H3", "Eq. (FIRE)", H3},
                   {"H4", "Eq. (FIRE)", H4}};
    m.darboux = {{"J1", coordinate("J1", 2), cofactor()},
                 {"J2", coordinate("J2", 3), cofactor()},
                 {"J3", coordinate("J3", 0), cofactor()},
                 {"J4", j4_field(), cofactor()}};
    const auto tri = tri_hamiltonian_set(H1, H2, H3, chart());
    const ScalarField theta = paper_conformal();
    m.structures = {{"N1", tri[0], H1, theta}, {"N2", tri[1], H2, theta}, {"N3", tri[2], H3, theta}};
    m.displayed = displayed();
    m.sample_domain = [](const State& s) {
      return std::abs(s.coords[0]) >= 0.1 && std::abs(s.coords[2]) >= 0.1 &&
             std::abs(s.coords[3]) >= 0.1;
    };
    return m;
  };
  return d;
}

ReductionSpec raychaudhuri_reduction() {
  ReductionSpec r;
  r.name = "raychaudhuri_reduced";
  r.anchor = "Eq. (RedRay)";
  r.ambient = "raychaudhuri";
  r.x_index = 1;
  r.y_index = 3;
  r.lift = [](double x, double z, const LevelValues& lv, const Params&) {
    return vec({z / lv.kappa, x, lv.tau * z, z});
  };
  r.validate = [](const LevelValues& lv, const Params&) { raychaudhuri::mu(lv); };
  r.domain = [](const LevelValues&) -> DomainPredicate {
    return [](const State& s) { return away(s.coords[1]); };
  };
  r.displayed = [](const LevelValues& lv, const Params&) {
    const double m = raychaudhuri::mu(lv);
    PlanarSystem sys;
    sys.name = "RedRay";
    sys.chart = CoordChart("RedRay", {"x", "z"});
    sys.f = make_field(
        "f", 2,
        [m](const State& s) {
          const double x = s.coords[0], z = s.coords[1];
          return -0.5 * x * x + m * z * z;
        },
        [m](const State& s) { return vec({-s.coords[0], 2.0 * m * s.coords[1]}); });
    sys.g = make_field(
        "g", 2, [](const State& s) { return -s.coords[0] * s.coords[1]; },
        [](const State& s) { return vec({-s.coords[1], -s.coords[0]}); });
    return sys;
  };
  return r;
}

}  // namespace detail

}  // namespace quadham
