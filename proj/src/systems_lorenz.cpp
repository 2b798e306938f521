#include "systems_internal.hpp"

namespace quadham {

namespace lorenz {

VectorField raw_field(double sigma, double rho, double beta) {
  return detail::make_vector_field(
      "lorenz", 3,
      [=](const State& s) {
        const double x = s.coords[0], y = s.coords[1], z = s.coords[2];
        return detail::vec({sigma * (y - x), rho * x - x * z - y, -beta * z + x * y});
      },
      [=](const State& s) {
        const double x = s.coords[0], y = s.coords[1], z = s.coords[2];
        Mat j(3, 3);
        j << -sigma, sigma, 0.0,
             rho - z, -1.0, -x,
             y, x, -beta;
        return j;
      });
}

namespace {

MatrixField constant_shape(std::string name, std::function<Mat(const State&)> eval) {
  MatrixField m;
  m.name = std::move(name);
  m.dim = 3;
  m.eval = std::move(eval);
  return m;
}

ScalarField rho0_h1() {
  return make_field(
      "H1", 3, [](const State& s) { return s.coords[2] - s.coords[0] * s.coords[0]; },
      [](const State& s) { return detail::vec({-2.0 * s.coords[0], 0.0, 1.0}); });
}

ScalarField rho0_h2() {
  return make_field(
      "H2", 3,
      [](const State& s) { return s.coords[1] * s.coords[1] + s.coords[2] * s.coords[2]; },
      [](const State& s) { return detail::vec({0.0, 2.0 * s.coords[1], 2.0 * s.coords[2]}); });
}

ScalarField conservative_h1() {
  return make_field(
      "H1", 3,
      [](const State& s) {
        const double x = s.coords[0], y = s.coords[1], z = s.coords[2];
        return 0.5 * (y * y + z * z - x * x);
      },
      [](const State& s) { return detail::vec({-s.coords[0], s.coords[1], s.coords[2]}); });
}

ScalarField conservative_h2() {
  return make_field(
      "H2", 3, [](const State& s) { return 0.5 * s.coords[0] * s.coords[0] - s.coords[2]; },
      [](const State& s) { return detail::vec({s.coords[0], 0.0, -1.0}); });
}

}  // namespace

DisplayedPair displayed_pair(const std::string& system) {
  DisplayedPair d;
  if (system == "lorenz_rho0") {
    d.n1 = constant_shape("N1(j1)", [](const State& s) {
      const double u = s.coords[0];
      Mat m(3, 3);
      m << 0.0, 1.0, 0.0,
           -1.0, 0.0, -2.0 * u,
           0.0, 2.0 * u, 0.0;
      return Mat(0.25 * m);
    });
    d.n2 = constant_shape("N2(j1)", [](const State& s) {
      const double v = s.coords[1], w = s.coords[2];
      Mat m(3, 3);
      m << 0.0, -w, v,
           w, 0.0, 0.0,
           -v, 0.0, 0.0;
      return Mat(0.5 * m);
    });
    d.h1 = rho0_h1();
    d.h2 = rho0_h2();
  } else if (system == "lorenz_conservative") {
    d.n1 = constant_shape("N1(j1l)", [](const State& s) {
      const double x = s.coords[0], y = s.coords[1], z = s.coords[2];
      Mat m(3, 3);
      m << 0.0, z, -y,
           -z, 0.0, -x,
           y, x, 0.0;
      return m;
    });
    d.n2 = constant_shape("N2(j1l)", [](const State& s) {
      const double x = s.coords[0];
      Mat m(3, 3);
      m << 0.0, 1.0, 0.0,
           -1.0, 0.0, -x,
           0.0, x, 0.0;
      return m;
    });
    d.h1 = conservative_h1();
    d.h2 = conservative_h2();
  } else {
    throw UnknownSystemError("no displayed Lorenz pair for '" + system + "'");
  }
  return d;
}

}  // namespace lorenz

namespace detail {

std::vector<SystemDescriptor> lorenz_descriptors() {
  SystemDescriptor rho0;
  rho0.name = "lorenz_rho0";
  rho0.anchor = "Eq. (has), integrals (tindepc), matrices (j1)";
  rho0.chart = CoordChart("lorenz_rho0", {"u", "v", "w"});
  rho0.default_state = vec({1.0, 0.5, 0.2});
  rho0.build = [](const Params&) {
    SystemModel m;
    m.field = make_vector_field(
        "lorenz_rho0", 3,
        [](const State& s) {
          const double u = s.coords[0], v = s.coords[1], w = s.coords[2];
          return vec({0.5 * v, -u * w, u * v});
        },
        [](const State& s) {
          const double u = s.coords[0], v = s.coords[1], w = s.coords[2];
          Mat j(3, 3);
          j << 0.0, 0.5, 0.0,
               -w, 0.0, -u,
               v, u, 0.0;
          return j;
        });
    const auto pair = lorenz::displayed_pair("lorenz_rho0");
    m.integrals = {{"H1", "(tindepc)", pair.h1}, {"H2", "(tindepc)", pair.h2}};
    return m;
  };

  SystemDescriptor cons;
  cons.name = "lorenz_conservative";
  cons.anchor = "Eq. (clor), integrals (hc12), matrices (j1l)";
  cons.chart = CoordChart("lorenz_conservative", {"x", "y", "z"});
  cons.default_state = vec({0.5, 0.2, 0.1});
  cons.build = [](const Params&) {
    SystemModel m;
    m.field = make_vector_field(
        "lorenz_conservative", 3,
        [](const State& s) {
          const double x = s.coords[0], y = s.coords[1], z = s.coords[2];
          return vec({y, -x * z + x, x * y});
        },
        [](const State& s) {
          const double x = s.coords[0], y = s.coords[1], z = s.coords[2];
          Mat j(3, 3);
          j << 0.0, 1.0, 0.0,
               1.0 - z, 0.0, -x,
               y, x, 0.0;
          return j;
        });
    const auto pair = lorenz::displayed_pair("lorenz_conservative");
    m.integrals = {{"H1", "(hc12)", pair.h1}, {"H2", "(hc12)", pair.h2}};
    return m;
  };
  return {rho0, cons};
}

std::vector<TransformSpec> lorenz_transforms() {
  TransformSpec rho0;
  rho0.name = "lorenz_rho0_map";
  rho0.anchor = "rho = 0 change of dynamical variables and time";
  rho0.source = "lorenz";
  rho0.target = "lorenz_rho0";
  rho0.defaults = {{"sigma", 0.5}, {"rho", 0.0}, {"beta", 1.0}};
  rho0.source_field = [](const Params& p) {
    return lorenz::raw_field(p.at("sigma"), p.at("rho"), p.at("beta"));
  };
  // t = -log(tbar^2 / 4) on the branch tbar > 0.
  rho0.forward = [](const State& s, const Params&) {
    const double tbar = 2.0 * std::exp(-0.5 * s.t);
    return State(vec({2.0 * s.coords[0] / tbar, 4.0 * s.coords[1] / (tbar * tbar),
                      4.0 * s.coords[2] / (tbar * tbar)}),
                 tbar);
  };
  rho0.inverse = [](const State& s, const Params&) {
    const double tbar = s.t;
    if (!(tbar > 0.0)) throw DomainError("lorenz_rho0_map: rescaled time must be positive");
    return State(vec({0.5 * tbar * s.coords[0], 0.25 * tbar * tbar * s.coords[1],
                      0.25 * tbar * tbar * s.coords[2]}),
                 -std::log(0.25 * tbar * tbar));
  };

  TransformSpec scaling;
  scaling.name = "lorenz_scaling";
  scaling.anchor = "Eq. (trclim)";
  scaling.source = "lorenz";
  scaling.target = "lorenz_conservative";
  scaling.defaults = {{"sigma", 10.0}, {"rho", 1e6}, {"beta", 8.0 / 3.0}};
  scaling.source_field = rho0.source_field;
  scaling.forward = [](const State& s, const Params& p) {
    const double sigma = p.at("sigma");
    const double eps = 1.0 / std::sqrt(sigma * p.at("rho"));
    return State(vec({eps * s.coords[0], sigma * eps * eps * s.coords[1],
                      sigma * eps * eps * s.coords[2]}),
                 s.t / eps);
  };
  scaling.inverse = [](const State& s, const Params& p) {
    const double sigma = p.at("sigma");
    const double eps = 1.0 / std::sqrt(sigma * p.at("rho"));
    return State(vec({s.coords[0] / eps, s.coords[1] / (sigma * eps * eps),
                      s.coords[2] / (sigma * eps * eps)}),
                 s.t * eps);
  };
  return {rho0, scaling};
}

}  // namespace detail

}  // namespace quadham
