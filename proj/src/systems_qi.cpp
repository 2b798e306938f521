#include "systems_internal.hpp"

#include <numbers>

namespace quadham {

namespace {

const Params& defaults() {
  static const Params p = {{"alpha", 0.0},   {"beta", 0.0},    {"gamma", -1.0},
                           {"delta", 2.0},   {"epsilon", 2.0}, {"lambda", 1.0}};
  return p;
}

Constraint para() {
  return {"α + β = 0 and γ + ε + λ = δ required", [](const Params& p) {
            return detail::nearly(p.at("alpha") + p.at("beta"), 0.0) &&
                   detail::nearly(p.at("gamma") + p.at("epsilon") + p.at("lambda"), p.at("delta"));
          }};
}

const CoordChart& original_chart() {
  static const CoordChart c("qi_original", {"u", "x", "y", "z"}, 0);
  return c;
}

const CoordChart& sqpr_chart() {
  static const CoordChart c("qi_sqpr", {"s", "q", "p", "r"}, 0);
  return c;
}

struct Rates {
  double a, b, g, d, e, l;
  explicit Rates(const Params& p)
      : a(p.at("alpha")), b(p.at("beta")), g(p.at("gamma")), d(p.at("delta")),
        e(p.at("epsilon")), l(p.at("lambda")) {}
};

VectorField original_field(const Params& params) {
  const Rates k(params);
  return detail::make_vector_field(
      "qi_original", 4,
      [k](const State& s) {
        const double u = s.coords[0], x = s.coords[1], y = s.coords[2], z = s.coords[3];
        return detail::vec({-k.d * u + k.l * z + x * y, k.a * (y - x) + y * z,
                            k.b * (x + y) - x * z, -k.g * z - k.e * u + x * y});
      },
      [k](const State& s) {
        const double x = s.coords[1], y = s.coords[2], z = s.coords[3];
        Mat j(4, 4);
        j << -k.d, y, x, k.l,
             0.0, -k.a, k.a + z, y,
             0.0, k.b - z, k.b, -x,
             -k.e, y, x, -k.g;
        return j;
      });
}

VectorField transformed_field(const Params& params) {
  const Rates k(params);
  return detail::make_vector_field(
      "qi_transformed", 4,
      [k](const State& st) {
        const double s = st.coords[0], q = st.coords[1], p = st.coords[2], r = st.coords[3];
        const double E1 = std::exp((k.g + k.l - 2.0 * k.a) * st.t);
        const double E2 = std::exp(-(k.g + k.l) * st.t);
        const double w = k.l * r - k.e * s + p * q * E1;
        return detail::vec({w, p * (k.b - r * E2), q * (r * E2 - k.b), w});
      },
      [k](const State& st) {
        const double q = st.coords[1], p = st.coords[2], r = st.coords[3];
        const double E1 = std::exp((k.g + k.l - 2.0 * k.a) * st.t);
        const double E2 = std::exp(-(k.g + k.l) * st.t);
        Mat j(4, 4);
        j << -k.e, p * E1, q * E1, k.l,
             0.0, 0.0, k.b - r * E2, -p * E2,
             0.0, r * E2 - k.b, 0.0, q * E2,
             -k.e, p * E1, q * E1, k.l;
        return j;
      },
      false);
}

VectorField special_field(const Params& params) {
  const Rates k(params);
  return detail::make_vector_field(
      "qi_special", 4,
      [k](const State& st) {
        const double s = st.coords[0], q = st.coords[1], p = st.coords[2], r = st.coords[3];
        const double w = k.l * r - k.e * s + p * q;
        return detail::vec({w, -p * r, q * r, w});
      },
      [k](const State& st) {
        const double q = st.coords[1], p = st.coords[2], r = st.coords[3];
        Mat j(4, 4);
        j << -k.e, p, q, k.l,
             0.0, 0.0, -r, -p,
             0.0, r, 0.0, q,
             -k.e, p, q, k.l;
        return j;
      });
}

ScalarField H1() {
  return make_field("H1", 4, [](const State& s) { return s.coords[3] - s.coords[0]; },
                    [](const State&) { return detail::vec({-1.0, 0.0, 0.0, 1.0}); });
}

ScalarField H2() {
  return make_field(
      "H2", 4,
      [](const State& s) { return s.coords[2] * s.coords[2] + s.coords[1] * s.coords[1]; },
      [](const State& s) { return detail::vec({0.0, 2.0 * s.coords[1], 2.0 * s.coords[2], 0.0}); });
}

// arcsin(q / sqrt(q^2 + p^2)) through the two-argument angle.
double angle(const State& s) { return std::atan2(s.coords[1], s.coords[2]); }

bool off_axis(const State& s) {
  const double q = s.coords[1], p = s.coords[2];
  return q * q + p * p > 1e-9;
}

ScalarField H3(const Rates& k) {
  const double c = 1.0 / (k.e - k.l), e = k.e;
  return make_field(
      "H3", 4,
      [c, e](const State& st) {
        const double s = st.coords[0], q = st.coords[1], r = st.coords[3];
        return c * (e * (r - s) * angle(st) + 0.5 * q * q + 0.5 * r * r);
      },
      [c, e](const State& st) {
        const double s = st.coords[0], q = st.coords[1], p = st.coords[2], r = st.coords[3];
        const double th = angle(st), rho2 = q * q + p * p, kap = r - s;
        return Vec(c * detail::vec({-e * th, e * kap * p / rho2 + q, -e * kap * q / rho2, e * th + r}));
      },
      [k](const State& st) { return off_axis(st) && k.e != k.l; });
}

std::vector<DisplayedUV> displayed(const Rates& k) {
  const double c = 1.0 / (k.e - k.l), e = k.e;
  std::vector<DisplayedUV> d;
  d.push_back({"N1", "Sec. 3.4 vector list",
               [c, e](const State& st) {
                 const double s = st.coords[0], q = st.coords[1], p = st.coords[2], r = st.coords[3];
                 const double th = angle(st);
                 return Vec3(2.0 * c * Vec3(e * p * th + p * r, -e * q * th - q * r, -e * (r - s) - p * q));
               },
               [c, e](const State& st) {
                 return Vec3(2.0 * e * c * angle(st) * Vec3(st.coords[1], st.coords[2], 0.0));
               }});
  d.push_back({"N2", "Sec. 3.4 vector list",
               [c, e](const State& st) {
                 const double s = st.coords[0], q = st.coords[1], p = st.coords[2], r = st.coords[3];
                 const double rho2 = q * q + p * p;
                 return Vec3(c * Vec3(-e * (r - s) * q / rho2, -e * (r - s) * p / rho2 - q, 0.0));
               },
               [c, e](const State& st) {
                 const double s = st.coords[0], q = st.coords[1], p = st.coords[2], r = st.coords[3];
                 const double rho2 = q * q + p * p;
                 return Vec3(c * Vec3(e * (r - s) * p / rho2 + q, -e * (r - s) * q / rho2, r));
               }});
  d.push_back({"N3", "Sec. 3.4 vector list",
               [](const State& st) { return Vec3(-2.0 * st.coords[2], 2.0 * st.coords[1], 0.0); },
               [](const State& st) { return Vec3(-2.0 * st.coords[1], -2.0 * st.coords[2], 0.0); }});
  return d;
}

double root(const LevelValues& lv, double q) { return std::sqrt(lv.tau - q * q); }

DomainPredicate level_domain(const LevelValues& lv) { return detail::sqrt_guard(lv.tau, 1); }

CoordChart planar_chart(const std::string& name) { return CoordChart(name, {"r", "q"}); }

CoordChart canonical_chart() { return CoordChart("qi_canonical", {"Q", "P"}); }

}  // namespace

namespace qi {

MultiplierBundle reduced_bundle(const LevelValues& lv, const Params& params) {
  const Rates k(resolve_params(find_system("qi_transformed"), params));
  const double kap = lv.kappa, tau = lv.tau;
  const DomainPredicate dom = level_domain(lv);
  auto G = [k](double t) { return std::exp((k.e - k.l) * t); };
  auto E1 = [k](double t) { return std::exp((k.g + k.l - 2.0 * k.a) * t); };
  auto E2 = [k](double t) { return std::exp(-(k.g + k.l) * t); };

  MultiplierBundle b;
  b.M = make_field(
      "M", 2, [=](const State& s) { return G(s.t) / root(lv, s.coords[1]); },
      [=](const State& s) {
        const double w = root(lv, s.coords[1]);
        return detail::vec({0.0, G(s.t) * s.coords[1] / (w * w * w)});
      },
      dom, [=](const State& s) { return (k.e - k.l) * G(s.t) / root(lv, s.coords[1]); });
  b.psi = make_field("psi", 2, [k](const State& s) { return (k.l - k.e) * s.coords[0]; },
                     [k](const State&) { return detail::vec({k.l - k.e, 0.0}); });
  b.phi = make_field(
      "phi", 2, [=](const State& s) { return k.b * root(lv, s.coords[1]); },
      [=](const State& s) { return detail::vec({0.0, -k.b * s.coords[1] / root(lv, s.coords[1])}); },
      dom);
  b.H = make_field(
      "H", 2,
      [=](const State& s) {
        const double r = s.coords[0], q = s.coords[1], t = s.t;
        return G(t) * (E2(t) * 0.5 * r * r + k.e * kap * std::asin(q / std::sqrt(tau)) +
                       0.5 * q * q * E1(t));
      },
      [=](const State& s) {
        const double r = s.coords[0], q = s.coords[1], t = s.t;
        return detail::vec({G(t) * E2(t) * r, G(t) * (k.e * kap / root(lv, q) + q * E1(t))});
      },
      dom,
      [=](const State& s) {
        const double r = s.coords[0], q = s.coords[1], t = s.t;
        const double inner =
            E2(t) * 0.5 * r * r + k.e * kap * std::asin(q / std::sqrt(tau)) + 0.5 * q * q * E1(t);
        const double inner_dt = -(k.g + k.l) * E2(t) * 0.5 * r * r +
                                (k.g + k.l - 2.0 * k.a) * E1(t) * 0.5 * q * q;
        return (k.e - k.l) * G(t) * inner + G(t) * inner_dt;
      });
  b.Q = make_field(
      "Q", 2, [=](const State& s) { return G(s.t) * s.coords[0]; },
      [=](const State& s) { return detail::vec({G(s.t), 0.0}); }, {},
      [=](const State& s) { return (k.e - k.l) * G(s.t) * s.coords[0]; });
  b.P = make_field(
      "P", 2, [=](const State& s) { return std::asin(s.coords[1] / std::sqrt(tau)) - k.b * s.t; },
      [=](const State& s) { return detail::vec({0.0, 1.0 / root(lv, s.coords[1])}); }, dom,
      [k](const State&) { return -k.b; });
  return b;
}

PlanarSystem canonical_displayed(const LevelValues& lv, const Params& params) {
  const Rates k(resolve_params(find_system("qi_transformed"), params));
  const double kap = lv.kappa, tau = lv.tau;
  PlanarSystem sys;
  sys.name = "Qi2DCan";
  sys.chart = canonical_chart();
  sys.autonomous = false;
  sys.f = make_field(
      "Qdot", 2,
      [=](const State& s) {
        const double ph = s.coords[1] + k.b * s.t;
        return std::exp((k.e - k.l) * s.t) * k.e * kap +
               0.5 * tau * std::sin(2.0 * ph) * std::exp((k.e + k.g - 2.0 * k.a) * s.t);
      },
      [=](const State& s) {
        const double ph = s.coords[1] + k.b * s.t;
        return detail::vec({0.0, tau * std::cos(2.0 * ph) * std::exp((k.e + k.g - 2.0 * k.a) * s.t)});
      });
  sys.g = make_field(
      "Pdot", 2, [k](const State& s) { return -s.coords[0] * std::exp(-(k.e + k.g) * s.t); },
      [k](const State& s) { return detail::vec({-std::exp(-(k.e + k.g) * s.t), 0.0}); });
  return sys;
}

PlanarSystem canonical_pushforward(const LevelValues& lv, const Params& params) {
  const Rates k(resolve_params(find_system("qi_transformed"), params));
  const PlanarSystem red = reduce("qi_reduced", lv, params);
  const double rt = std::sqrt(lv.tau);
  auto G = [k](double t) { return std::exp((k.e - k.l) * t); };
  // (Q, P) -> (r, q) = (Q / G, sqrt(tau) sin(P + beta t)) on the principal branch.
  auto planar = [=](const State& s) {
    return State(detail::vec({s.coords[0] / G(s.t), rt * std::sin(s.coords[1] + k.b * s.t)}), s.t);
  };
  PlanarSystem sys;
  sys.name = "Qi2DCan(derived)";
  sys.chart = canonical_chart();
  sys.autonomous = false;
  sys.domain = [k](const State& s) {
    return std::abs(s.coords[1] + k.b * s.t) < 0.5 * std::numbers::pi - 1e-6;
  };
  sys.f = make_field(
      "Qdot", 2,
      [=](const State& s) {
        const State m = planar(s);
        return (k.e - k.l) * G(s.t) * m.coords[0] + G(s.t) * red.f.value(m);
      },
      {}, sys.domain);
  sys.g = make_field(
      "Pdot", 2,
      [=](const State& s) {
        const State m = planar(s);
        return red.g.value(m) / (rt * std::cos(s.coords[1] + k.b * s.t)) - k.b;
      },
      {}, sys.domain);
  return sys;
}

ScalarField canonical_hamiltonian(const LevelValues& lv, const Params& params) {
  const Rates k(resolve_params(find_system("qi_transformed"), params));
  const double kap = lv.kappa, tau = lv.tau;
  return make_field(
      "H", 2,
      [=](const State& s) {
        const double Q = s.coords[0], ph = s.coords[1] + k.b * s.t, sn = std::sin(ph);
        return std::exp(-(k.g + k.e) * s.t) * 0.5 * Q * Q +
               k.e * kap * std::exp((k.e - k.l) * s.t) * ph +
               0.5 * tau * std::exp((k.e + k.g - 2.0 * k.a) * s.t) * sn * sn;
      },
      [=](const State& s) {
        const double Q = s.coords[0], ph = s.coords[1] + k.b * s.t;
        return detail::vec({std::exp(-(k.g + k.e) * s.t) * Q,
                            k.e * kap * std::exp((k.e - k.l) * s.t) +
                                0.5 * tau * std::exp((k.e + k.g - 2.0 * k.a) * s.t) * std::sin(2.0 * ph)});
      },
      {},
      [=](const State& s) {
        const double Q = s.coords[0], ph = s.coords[1] + k.b * s.t, sn = std::sin(ph);
        const double Eq = std::exp(-(k.g + k.e) * s.t), Eg = std::exp((k.e - k.l) * s.t);
        const double Es = std::exp((k.e + k.g - 2.0 * k.a) * s.t);
        return -(k.g + k.e) * Eq * 0.5 * Q * Q + k.e * kap * ((k.e - k.l) * Eg * ph + Eg * k.b) +
               0.5 * tau * ((k.e + k.g - 2.0 * k.a) * Es * sn * sn + Es * k.b * std::sin(2.0 * ph));
      });
}

PlanarSystem rescaled_time_displayed(const LevelValues& lv, const Params& params) {
  const Rates k(resolve_params(find_system("qi_transformed"), params));
  const double kap = lv.kappa, c = k.e - k.l;
  PlanarSystem sys;
  sys.name = "QiPl1(rescaled, printed)";
  sys.chart = planar_chart(sys.name);
  sys.autonomous = false;
  sys.domain = level_domain(lv);
  sys.f = make_field(
      "rdot", 2,
      [=](const State& s) {
        const double r = s.coords[0], q = s.coords[1];
        return (k.e * kap / c + q * root(lv, q) - r) / s.t;
      },
      {}, sys.domain);
  sys.g = make_field(
      "qdot", 2, [=](const State& s) { return -s.coords[0] / s.t * root(lv, s.coords[1]); }, {},
      sys.domain);
  return sys;
}

PlanarSystem rescaled_time_derived(const LevelValues& lv, const Params& params) {
  const Rates k(resolve_params(find_system("qi_transformed"), params));
  const PlanarSystem red = reduce("qi_reduced", lv, params);
  const double c = k.e - k.l;
  if (c == 0.0) throw std::invalid_argument("rescaled time requires epsilon != lambda");
  // tbar = exp(c t) / c, so dt/dtbar = 1 / (c tbar).
  auto original = [c](const State& s) { return State(s.coords, std::log(c * s.t) / c); };
  PlanarSystem sys;
  sys.name = "QiPl1(rescaled, derived)";
  sys.chart = planar_chart(sys.name);
  sys.autonomous = false;
  sys.domain = [c, dom = level_domain(lv)](const State& s) { return c * s.t > 0.0 && dom(s); };
  sys.f = make_field(
      "rdot", 2, [=](const State& s) { return red.f.value(original(s)) / (c * s.t); }, {},
      sys.domain);
  sys.g = make_field(
      "qdot", 2, [=](const State& s) { return red.g.value(original(s)) / (c * s.t); }, {},
      sys.domain);
  return sys;
}

}  // namespace qi

namespace detail {

std::vector<SystemDescriptor> qi_descriptors() {
  SystemDescriptor orig;
  orig.name = "qi_original";
  orig.anchor = "Eq. (QiSystem), constraints (paraQi), integrals (QiFI)";
  orig.chart = original_chart();
  orig.defaults = defaults();
  orig.constraints = {para()};
  orig.default_state = vec({0.5, 0.4, 0.3, 0.2});
  orig.build = [](const Params& params) {
    const Rates k(params);
    const double A = k.g + k.l, a = k.a;
    SystemModel m;
    m.field = original_field(params);
    m.integrals = {
        {"I1", "Eq. (QiFI)",
         make_field(
             "I1", 4,
             [A](const State& s) { return (s.coords[3] - s.coords[0]) * std::exp(A * s.t); },
             [A](const State& s) { return Vec(std::exp(A * s.t) * vec({-1.0, 0.0, 0.0, 1.0})); }, {},
             [A](const State& s) { return A * (s.coords[3] - s.coords[0]) * std::exp(A * s.t); })},
        {"I2", "Eq. (QiFI)",
         make_field(
             "I2", 4,
             [a](const State& s) {
               const double x = s.coords[1], y = s.coords[2];
               return (x * x + y * y) * std::exp(2.0 * a * s.t);
             },
             [a](const State& s) {
               return Vec(std::exp(2.0 * a * s.t) * vec({0.0, 2.0 * s.coords[1], 2.0 * s.coords[2], 0.0}));
             },
             {},
             [a](const State& s) {
               const double x = s.coords[1], y = s.coords[2];
               return 2.0 * a * (x * x + y * y) * std::exp(2.0 * a * s.t);
             })}};
    m.sampling.t_lo = 0.0;
    m.sampling.t_hi = 1.0;
    return m;
  };

  SystemDescriptor trans;
  trans.name = "qi_transformed";
  trans.anchor = "Eq. (hyperQid), integrals (QiFI2)";
  trans.chart = sqpr_chart();
  trans.defaults = defaults();
  trans.constraints = {para()};
  trans.default_state = vec({0.2, 0.6, 0.8, 0.5});
  trans.build = [](const Params& params) {
    SystemModel m;
    m.field = transformed_field(params);
    m.integrals = {{"H1", "Eq. (QiFI2)", H1()}, {"H2", "Eq. (QiFI2)", H2()}};
    m.sampling.t_lo = 0.0;
    m.sampling.t_hi = 1.0;
    return m;
  };

  SystemDescriptor spec;
  spec.name = "qi_special";
  spec.anchor = "Eq. (hyperQid) with λ = −γ, δ = ε, α = β = 0; integrals (QiFI2), (QiH32)";
  spec.chart = sqpr_chart();
  spec.defaults = defaults();
  spec.constraints = {
      para(),
      {"α = β = 0 required",
       [](const Params& p) { return nearly(p.at("alpha"), 0.0) && nearly(p.at("beta"), 0.0); }},
      {"λ = −γ required", [](const Params& p) { return nearly(p.at("lambda"), -p.at("gamma")); }},
      {"δ = ε required", [](const Params& p) { return nearly(p.at("delta"), p.at("epsilon")); }},
      {"ε ≠ λ required", [](const Params& p) { return !nearly(p.at("epsilon"), p.at("lambda")); }}};
  spec.default_state = vec({0.2, 0.6, 0.8, 0.5});
  spec.build = [](const Params& params) {
    const Rates k(params);
    SystemModel m;
    m.field = special_field(params);
    const ScalarField h1 = H1(), h2 = H2(), h3 = H3(k);
    m.integrals = {{"H1", "Eq. (QiFI2)", h1}, {"H2", "Eq. (QiFI2)", h2}};
    m.candidate_integrals = {{"H3", "Eq. (QiH32)", h3}};
    const auto tri = tri_hamiltonian_set(h1, h2, h3, sqpr_chart());
    m.structures = {{"N1", tri[0], h1, std::nullopt},
                    {"N2", tri[1], h2, std::nullopt},
                    {"N3", tri[2], h3, std::nullopt}};
    m.displayed = displayed(k);
    // p > 0 keeps the angle on the principal arcsin branch.
    m.sample_domain = [](const State& s) { return s.coords[2] > 0.05; };
    return m;
  };
  return {orig, trans, spec};
}

std::vector<TransformSpec> qi_transforms() {
  TransformSpec tr;
  tr.name = "qi_trans";
  tr.anchor = "Eq. (Qitrans)";
  tr.source = "qi_original";
  tr.target = "qi_transformed";
  tr.defaults = defaults();
  tr.source_field = original_field;
  tr.forward = [](const State& s, const Params& p) {
    const Rates k(p);
    const double eA = std::exp((k.g + k.l) * s.t), ea = std::exp(k.a * s.t);
    // (u, x, y, z) -> (s, q, p, r)
    return State(vec({s.coords[0] * eA, s.coords[2] * ea, s.coords[1] * ea, s.coords[3] * eA}), s.t);
  };
  tr.inverse = [](const State& s, const Params& p) {
    const Rates k(p);
    const double eA = std::exp(-(k.g + k.l) * s.t), ea = std::exp(-k.a * s.t);
    return State(vec({s.coords[0] * eA, s.coords[2] * ea, s.coords[1] * ea, s.coords[3] * eA}), s.t);
  };

  TransformSpec time;
  time.name = "qi_time";
  time.anchor = "Sec. 3.4 time map tbar = exp((epsilon - lambda) t) / (epsilon - lambda)";
  time.source = "qi_special";
  time.target = "";
  time.defaults = defaults();
  time.source_field = special_field;
  time.forward = [](const State& s, const Params& p) {
    const double c = p.at("epsilon") - p.at("lambda");
    if (c == 0.0) throw DomainError("qi_time: epsilon must differ from lambda");
    return State(s.coords, std::exp(c * s.t) / c);
  };
  time.inverse = [](const State& s, const Params& p) {
    const double c = p.at("epsilon") - p.at("lambda");
    if (c == 0.0) throw DomainError("qi_time: epsilon must differ from lambda");
    if (!(c * s.t > 0.0)) throw DomainError("qi_time: rescaled time outside the image of the map");
    return State(s.coords, std::log(c * s.t) / c);
  };
  return {tr, time};
}

ReductionSpec qi_reduction() {
  ReductionSpec red;
  red.name = "qi_reduced";
  red.anchor = "Eq. (QiPl1)";
  red.ambient = "qi_transformed";
  red.x_index = 3;
  red.y_index = 1;
  red.lift = [](double r, double q, const LevelValues& lv, const Params&) {
    return vec({r - lv.kappa, q, std::sqrt(std::max(0.0, lv.tau - q * q)), r});
  };
  red.validate = [](const LevelValues& lv, const Params&) {
    if (!(lv.tau > 0.0)) throw std::invalid_argument("qi reduction requires tau > 0");
  };
  red.domain = level_domain;
  red.displayed = [](const LevelValues& lv, const Params& params) {
    const Rates k(resolve_params(find_system("qi_transformed"), params));
    const double kap = lv.kappa;
    PlanarSystem sys;
    sys.name = "QiPl1";
    sys.chart = planar_chart("QiPl1");
    sys.autonomous = false;
    sys.domain = level_domain(lv);
    sys.f = make_field(
        "f", 2,
        [=](const State& s) {
          const double r = s.coords[0], q = s.coords[1];
          return k.e * kap + (k.l - k.e) * r +
                 q * root(lv, q) * std::exp((k.g + k.l - 2.0 * k.a) * s.t);
        },
        {}, sys.domain);
    sys.g = make_field(
        "g", 2,
        [=](const State& s) {
          const double r = s.coords[0], q = s.coords[1];
          return root(lv, q) * (k.b - r * std::exp(-(k.g + k.l) * s.t));
        },
        {}, sys.domain);
    return sys;
  };
  return red;
}

}  // namespace detail

}  // namespace quadham
