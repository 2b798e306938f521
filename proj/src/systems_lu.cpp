#include "systems_internal.hpp"

#include <numbers>

namespace quadham {

namespace {

const Params& defaults() {
  static const Params p = {{"alpha", 1.0}, {"beta", 2.0}, {"gamma", -2.0}, {"delta", -2.0}};
  return p;
}

Constraint first_pair() {
  return {"γ = −β = δ required", [](const Params& p) {
            return detail::nearly(p.at("gamma"), -p.at("beta")) &&
                   detail::nearly(p.at("gamma"), p.at("delta"));
          }};
}

Constraint autonomous_rate() {
  return {"γ = −2α required",
          [](const Params& p) { return detail::nearly(p.at("gamma"), -2.0 * p.at("alpha")); }};
}

const CoordChart& original_chart() {
  static const CoordChart c("lu_original", {"u", "x", "y", "z"}, 0);
  return c;
}

const CoordChart& spq_chart() {
  static const CoordChart c("lu_spqr", {"s", "p", "q", "r"}, 0);
  return c;
}

VectorField original_field(const Params& p) {
  const double a = p.at("alpha"), b = p.at("beta"), g = p.at("gamma"), d = p.at("delta");
  return detail::make_vector_field(
      "lu_original", 4,
      [=](const State& s) {
        const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
        return detail::vec({d * u + x * z, a * (y - x) + u, g * y - x * z, -b * z + x * y});
      },
      [=](const State& s) {
        const double x = s.coords[1], y = s.coords[2], z = s.coords[3];
        Mat j(4, 4);
        j << d, z, 0.0, x,
             1.0, -a, a, 0.0,
             0.0, -z, g, -x,
             0.0, y, x, -b;
        return j;
      });
}

VectorField transformed_field(const Params& p) {
  const double a = p.at("alpha"), g = p.at("gamma");
  return detail::make_vector_field(
      "lu_transformed", 4,
      [=](const State& st) {
        const double s = st.coords[0], pp = st.coords[1], q = st.coords[2], r = st.coords[3];
        const double E = std::exp(-a * st.t), F = std::exp((a + g) * st.t);
        return detail::vec({r * pp * E, (a * q + s) * F, -r * pp * E, q * pp * E});
      },
      [=](const State& st) {
        const double pp = st.coords[1], q = st.coords[2], r = st.coords[3];
        const double E = std::exp(-a * st.t), F = std::exp((a + g) * st.t);
        Mat j(4, 4);
        j << 0.0, r * E, 0.0, pp * E,
             F, 0.0, a * F, 0.0,
             0.0, -r * E, 0.0, -pp * E,
             0.0, q * E, pp * E, 0.0;
        return j;
      },
      false);
}

VectorField autonomous_field(const Params& p) {
  const double a = p.at("alpha");
  return detail::make_vector_field(
      "lu_autonomous", 4,
      [=](const State& st) {
        const double s = st.coords[0], pp = st.coords[1], q = st.coords[2], r = st.coords[3];
        return detail::vec({r * pp, a * q + s, -r * pp, q * pp});
      },
      [=](const State& st) {
        const double pp = st.coords[1], q = st.coords[2], r = st.coords[3];
        Mat j(4, 4);
        j << 0.0, r, 0.0, pp,
             1.0, 0.0, a, 0.0,
             0.0, -r, 0.0, -pp,
             0.0, q, pp, 0.0;
        return j;
      });
}

ScalarField H1() {
  return make_field("H1", 4, [](const State& s) { return s.coords[2] + s.coords[0]; },
                    [](const State&) { return detail::vec({1.0, 0.0, 1.0, 0.0}); });
}

ScalarField H2() {
  return make_field(
      "H2", 4,
      [](const State& s) { return s.coords[2] * s.coords[2] + s.coords[3] * s.coords[3]; },
      [](const State& s) { return detail::vec({0.0, 0.0, 2.0 * s.coords[2], 2.0 * s.coords[3]}); });
}

bool off_axis(const State& s) {
  const double q = s.coords[2], r = s.coords[3];
  return q * q + r * r > 1e-9;
}

// arcsin(q / sqrt(q^2 + r^2)) through the two-argument angle.
double angle(const State& s) { return std::atan2(s.coords[2], s.coords[3]); }

ScalarField H3(double a) {
  return make_field(
      "H3", 4,
      [a](const State& st) {
        const double s = st.coords[0], p = st.coords[1], q = st.coords[2], r = st.coords[3];
        return 0.5 * p * p + (q + s) * angle(st) - (a - 1.0) * r;
      },
      [a](const State& st) {
        const double s = st.coords[0], p = st.coords[1], q = st.coords[2], r = st.coords[3];
        const double th = angle(st), rho2 = q * q + r * r;
        return detail::vec({th, p, th + (q + s) * r / rho2, -(q + s) * q / rho2 - (a - 1.0)});
      },
      off_axis);
}

std::vector<DisplayedUV> displayed(double a) {
  std::vector<DisplayedUV> d;
  d.push_back({"N1", "Sec. 3.3 vector list",
               [a](const State& st) {
                 const double s = st.coords[0], p = st.coords[1], q = st.coords[2], r = st.coords[3];
                 return Vec3(-2.0 * a * q + s + r * angle(st), -r * p, q * p);
               },
               [](const State& st) {
                 return Vec3(-2.0 * angle(st) * Vec3(0.0, st.coords[2], st.coords[3]));
               }});
  d.push_back({"N2", "Sec. 3.3 vector list",
               [a](const State& st) {
                 const double s = st.coords[0], p = st.coords[1], q = st.coords[2], r = st.coords[3];
                 return Vec3(a - 1.0 + (q + s) * q / (q * q + r * r), 0.0, p);
               },
               [a](const State& st) {
                 const double s = st.coords[0], p = st.coords[1], q = st.coords[2], r = st.coords[3];
                 const double rho2 = q * q + r * r;
                 return Vec3(-p, -(q + s) * r / rho2, a - 1.0 + (q + s) * q / rho2);
               }});
  d.push_back({"N3", "Sec. 3.3 vector list",
               [](const State& st) { return Vec3(2.0 * st.coords[3], 0.0, 0.0); },
               [](const State& st) { return Vec3(2.0 * Vec3(0.0, st.coords[2], st.coords[3])); }});
  return d;
}

Vec lift(double p, double q, const LevelValues& lv, const Params&) {
  return detail::vec({lv.kappa - q, p, q, std::sqrt(std::max(0.0, lv.tau - q * q))});
}

void validate(const LevelValues& lv, const Params&) {
  if (!(lv.tau > 0.0)) throw std::invalid_argument("lu reduction requires tau > 0");
}

DomainPredicate level_domain(const LevelValues& lv) { return detail::sqrt_guard(lv.tau, 1); }

double root(const LevelValues& lv, double q) { return std::sqrt(lv.tau - q * q); }

// arcsin(q / sqrt(tau)) on the planar (p, q) chart.
ScalarField arcsin_q(const LevelValues& lv) {
  const double tau = lv.tau;
  return make_field(
      "Q", 2, [tau](const State& s) { return std::asin(s.coords[1] / std::sqrt(tau)); },
      [tau](const State& s) { return detail::vec({0.0, 1.0 / std::sqrt(tau - s.coords[1] * s.coords[1])}); },
      detail::sqrt_guard(tau, 1));
}

}  // namespace

namespace lu {

MultiplierBundle reduced_bundle(const LevelValues& lv, const Params& params) {
  const Params p = resolve_params(find_system("lu_transformed"), params);
  const double a = p.at("alpha"), g = p.at("gamma"), k = lv.kappa, tau = lv.tau;
  const DomainPredicate dom = level_domain(lv);
  MultiplierBundle b;
  b.M = make_field(
      "M", 2, [lv](const State& s) { return 1.0 / root(lv, s.coords[1]); },
      [lv](const State& s) {
        const double w = root(lv, s.coords[1]);
        return detail::vec({0.0, s.coords[1] / (w * w * w)});
      },
      dom);
  b.psi = constant_field(2, 0.0, "psi");
  b.phi = constant_field(2, 0.0, "phi");
  b.H = make_field(
      "H", 2,
      [=](const State& s) {
        const double pp = s.coords[0], q = s.coords[1];
        return std::exp((a + g) * s.t) * (k * std::asin(q / std::sqrt(tau)) - (a - 1.0) * root(lv, q)) +
               0.5 * pp * pp * std::exp(-a * s.t);
      },
      [=](const State& s) {
        const double pp = s.coords[0], q = s.coords[1];
        const double w = root(lv, q);
        return detail::vec({pp * std::exp(-a * s.t),
                            std::exp((a + g) * s.t) * (k + (a - 1.0) * q) / w});
      },
      dom,
      [=](const State& s) {
        const double pp = s.coords[0], q = s.coords[1];
        return (a + g) * std::exp((a + g) * s.t) *
                   (k * std::asin(q / std::sqrt(tau)) - (a - 1.0) * root(lv, q)) -
               0.5 * a * pp * pp * std::exp(-a * s.t);
      });
  b.Q = arcsin_q(lv);
  b.P = make_field("P", 2, [](const State& s) { return s.coords[0]; },
                   [](const State&) { return detail::vec({1.0, 0.0}); });
  return b;
}

ScalarField autonomous_reduced_hamiltonian(const LevelValues& lv, const Params& params) {
  const Params p = resolve_params(find_system("lu_autonomous"), params);
  const double a = p.at("alpha"), k = lv.kappa, tau = lv.tau;
  return make_field(
      "H", 2,
      [=](const State& s) {
        const double pp = s.coords[0], q = s.coords[1];
        return 0.5 * pp * pp + k * std::asin(q / std::sqrt(tau)) - (a - 1.0) * root(lv, q);
      },
      [=](const State& s) {
        const double q = s.coords[1];
        return detail::vec({s.coords[0], (k + (a - 1.0) * q) / root(lv, q)});
      },
      level_domain(lv));
}

namespace {
CoordChart canonical_chart() { return CoordChart("lu_canonical", {"Q", "P"}); }

bool principal(const State& s) { return std::abs(s.coords[0]) < 0.5 * std::numbers::pi - 1e-6; }
}  // namespace

PlanarSystem canonical_displayed(const LevelValues& lv, const Params& params) {
  const Params p = resolve_params(find_system("lu_transformed"), params);
  const double a = p.at("alpha"), g = p.at("gamma"), k = lv.kappa, rt = std::sqrt(lv.tau);
  PlanarSystem sys;
  sys.name = "Lu2DCan";
  sys.chart = canonical_chart();
  sys.autonomous = false;
  sys.f = make_field(
      "Qdot", 2, [a](const State& s) { return s.coords[1] * std::exp(-a * s.t); },
      [a](const State& s) { return detail::vec({0.0, std::exp(-a * s.t)}); });
  sys.g = make_field(
      "Pdot", 2,
      [=](const State& s) {
        return -std::exp((a + g) * s.t) * (k + (a - 1.0) * rt * std::sin(s.coords[0]));
      },
      [=](const State& s) {
        return detail::vec({-std::exp((a + g) * s.t) * (a - 1.0) * rt * std::cos(s.coords[0]), 0.0});
      });
  return sys;
}

PlanarSystem canonical_pushforward(const LevelValues& lv, const Params& params) {
  const PlanarSystem red = reduce("lu_reduced", lv, params);
  const double rt = std::sqrt(lv.tau);
  // (Q, P) -> (p, q) = (P, sqrt(tau) sin Q) on |Q| < pi/2.
  auto planar = [rt](const State& s) {
    return State(detail::vec({s.coords[1], rt * std::sin(s.coords[0])}), s.t);
  };
  PlanarSystem sys;
  sys.name = "Lu2DCan(derived)";
  sys.chart = canonical_chart();
  sys.autonomous = false;
  sys.domain = [](const State& s) { return principal(s); };
  sys.f = make_field(
      "Qdot", 2,
      [=](const State& s) { return red.g.value(planar(s)) / (rt * std::cos(s.coords[0])); }, {},
      sys.domain);
  sys.g = make_field("Pdot", 2, [=](const State& s) { return red.f.value(planar(s)); }, {},
                     sys.domain);
  return sys;
}

ScalarField canonical_hamiltonian(const LevelValues& lv, const Params& params) {
  const Params p = resolve_params(find_system("lu_transformed"), params);
  const double a = p.at("alpha"), g = p.at("gamma"), k = lv.kappa, rt = std::sqrt(lv.tau);
  return make_field(
      "H", 2,
      [=](const State& s) {
        const double Q = s.coords[0], P = s.coords[1];
        return std::exp((a + g) * s.t) * (k * Q - (a - 1.0) * rt * std::cos(Q)) +
               0.5 * P * P * std::exp(-a * s.t);
      },
      [=](const State& s) {
        const double Q = s.coords[0], P = s.coords[1];
        return detail::vec({std::exp((a + g) * s.t) * (k + (a - 1.0) * rt * std::sin(Q)),
                            P * std::exp(-a * s.t)});
      },
      {},
      [=](const State& s) {
        const double Q = s.coords[0], P = s.coords[1];
        return (a + g) * std::exp((a + g) * s.t) * (k * Q - (a - 1.0) * rt * std::cos(Q)) -
               0.5 * a * P * P * std::exp(-a * s.t);
      });
}

}  // namespace lu

namespace detail {

std::vector<SystemDescriptor> lu_descriptors() {
  SystemDescriptor orig;
  orig.name = "lu_original";
  orig.anchor = "Eq. (LuG), integrals (ILu1)";
  orig.chart = original_chart();
  orig.defaults = defaults();
  orig.constraints = {first_pair()};
  orig.default_state = vec({0.5, 0.4, 0.3, 0.2});
  orig.build = [](const Params& p) {
    SystemModel m;
    m.field = original_field(p);
    const double g = p.at("gamma");
    m.integrals = {
        {"I1", "Eq. (ILu1)",
         make_field(
             "I1", 4,
             [g](const State& s) { return std::exp(-g * s.t) * (s.coords[2] + s.coords[0]); },
             [g](const State& s) { return Vec(std::exp(-g * s.t) * vec({1.0, 0.0, 1.0, 0.0})); },
             {},
             [g](const State& s) {
               return -g * std::exp(-g * s.t) * (s.coords[2] + s.coords[0]);
             })},
        {"I2", "Eq. (ILu1)",
         make_field(
             "I2", 4,
             [g](const State& s) {
               const double y = s.coords[2], z = s.coords[3];
               return std::exp(-2.0 * g * s.t) * (y * y + z * z);
             },
             [g](const State& s) {
               return Vec(std::exp(-2.0 * g * s.t) * vec({0.0, 0.0, 2.0 * s.coords[2], 2.0 * s.coords[3]}));
             },
             {},
             [g](const State& s) {
               const double y = s.coords[2], z = s.coords[3];
               return -2.0 * g * std::exp(-2.0 * g * s.t) * (y * y + z * z);
             })}};
    m.sampling.t_lo = 0.0;
    m.sampling.t_hi = 1.0;
    return m;
  };

  SystemDescriptor trans;
  trans.name = "lu_transformed";
  trans.anchor = "Eq. (LunonAut), integrals (ILu)";
  trans.chart = spq_chart();
  trans.defaults = defaults();
  trans.constraints = {first_pair()};
  trans.default_state = vec({-0.29, 0.05, 0.3, 0.8});
  trans.build = [](const Params& p) {
    SystemModel m;
    m.field = transformed_field(p);
    m.integrals = {{"H1", "Eq. (ILu)", H1()}, {"H2", "Eq. (ILu)", H2()}};
    m.sampling.t_lo = 0.0;
    m.sampling.t_hi = 1.0;
    return m;
  };

  SystemDescriptor aut;
  aut.name = "lu_autonomous";
  aut.anchor = "Eq. (Lu2aut) ambient form, integrals (ILu), (H3Ray)";
  aut.chart = spq_chart();
  aut.defaults = defaults();
  aut.constraints = {first_pair(), autonomous_rate()};
  aut.default_state = vec({-0.29, 0.05, 0.3, 0.8});
  aut.build = [](const Params& p) {
    SystemModel m;
    const double a = p.at("alpha");
    m.field = autonomous_field(p);
    const ScalarField h1 = H1(), h2 = H2(), h3 = H3(a);
    m.integrals = {{"H1", "Eq. (ILu)", h1}, {"H2", "Eq. (ILu)", h2}, {"H3", "Eq. (H3Ray)", h3}};
    const auto tri = tri_hamiltonian_set(h1, h2, h3, spq_chart());
    const ScalarField theta = constant(4, -0.5);
    m.structures = {{"N1", tri[0], h1, theta}, {"N2", tri[1], h2, theta}, {"N3", tri[2], h3, theta}};
    m.displayed = displayed(a);
    // r > 0 keeps the angle on the principal arcsin branch.
    m.sample_domain = [](const State& s) { return s.coords[3] > 0.05; };
    return m;
  };
  return {orig, trans, aut};
}

std::vector<TransformSpec> lu_transforms() {
  TransformSpec cov;
  cov.name = "lu_cov";
  cov.anchor = "Eq. (cov)";
  cov.source = "lu_original";
  cov.target = "lu_transformed";
  cov.defaults = defaults();
  cov.source_field = original_field;
  cov.forward = [](const State& s, const Params& p) {
    const double a = p.at("alpha"), g = p.at("gamma");
    const double eg = std::exp(-g * s.t), ea = std::exp(a * s.t);
    return State(vec({s.coords[0] * eg, s.coords[1] * ea, s.coords[2] * eg, s.coords[3] * eg}), s.t);
  };
  cov.inverse = [](const State& s, const Params& p) {
    const double a = p.at("alpha"), g = p.at("gamma");
    const double eg = std::exp(g * s.t), ea = std::exp(-a * s.t);
    return State(vec({s.coords[0] * eg, s.coords[1] * ea, s.coords[2] * eg, s.coords[3] * eg}), s.t);
  };

  TransformSpec time;
  time.name = "lu_time";
  time.anchor = "Sec. 3.3 time map tbar = -exp(-alpha t) / alpha";
  time.source = "lu_transformed";
  time.target = "lu_autonomous";
  time.defaults = defaults();
  time.source_field = transformed_field;
  time.forward = [](const State& s, const Params& p) {
    const double a = p.at("alpha");
    if (a == 0.0) throw DomainError("lu_time: alpha must be nonzero");
    return State(s.coords, -std::exp(-a * s.t) / a);
  };
  time.inverse = [](const State& s, const Params& p) {
    const double a = p.at("alpha");
    if (a == 0.0) throw DomainError("lu_time: alpha must be nonzero");
    const double arg = -a * s.t;
    if (!(arg > 0.0)) throw DomainError("lu_time: rescaled time outside the image of the map");
    return State(s.coords, -std::log(arg) / a);
  };
  return {cov, time};
}

std::vector<ReductionSpec> lu_reductions() {
  ReductionSpec red;
  red.name = "lu_reduced";
  red.anchor = "Eq. (Lu3)";
  red.ambient = "lu_transformed";
  red.x_index = 1;
  red.y_index = 2;
  red.lift = lift;
  red.validate = validate;
  red.domain = level_domain;
  red.displayed = [](const LevelValues& lv, const Params& params) {
    const Params p = resolve_params(find_system("lu_transformed"), params);
    const double a = p.at("alpha"), g = p.at("gamma"), k = lv.kappa;
    PlanarSystem sys;
    sys.name = "Lu3";
    sys.chart = CoordChart("Lu3", {"p", "q"});
    sys.autonomous = false;
    sys.domain = level_domain(lv);
    sys.f = make_field(
        "f", 2, [=](const State& s) { return (k + (a - 1.0) * s.coords[1]) * std::exp((a + g) * s.t); },
        {});
    sys.g = make_field(
        "g", 2,
        [=](const State& s) { return -s.coords[0] * root(lv, s.coords[1]) * std::exp(-a * s.t); }, {},
        sys.domain);
    return sys;
  };

  ReductionSpec aut = red;
  aut.name = "lu_autonomous_reduced";
  aut.anchor = "Eq. (Lu2aut)";
  aut.ambient = "lu_autonomous";
  aut.displayed = [](const LevelValues& lv, const Params& params) {
    const Params p = resolve_params(find_system("lu_autonomous"), params);
    const double a = p.at("alpha"), k = lv.kappa;
    PlanarSystem sys;
    sys.name = "Lu2aut";
    sys.chart = CoordChart("Lu2aut", {"p", "q"});
    sys.domain = level_domain(lv);
    sys.f = make_field("f", 2, [=](const State& s) { return k + (a - 1.0) * s.coords[1]; },
                       [a](const State&) { return vec({0.0, a - 1.0}); });
    sys.g = make_field(
        "g", 2, [=](const State& s) { return -s.coords[0] * root(lv, s.coords[1]); }, {}, sys.domain);
    return sys;
  };
  return {red, aut};
}

}  // namespace detail

}  // namespace quadham
