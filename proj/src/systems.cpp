#include "quadham/systems.hpp"

#include "systems_internal.hpp"

#include <algorithm>

namespace quadham {

ScalarField make_field(std::string name, int dim, std::function<double(const State&)> eval,
                       std::function<Vec(const State&)> grad, DomainPredicate domain,
                       std::function<double(const State&)> dt) {
  ScalarField f;
  f.name = std::move(name);
  f.dim = dim;
  f.eval = std::move(eval);
  f.grad = std::move(grad);
  f.domain = std::move(domain);
  f.dt = std::move(dt);
  return f;
}

namespace {

// dq = omega p, dp = -omega q. Built-in test system with a known solution.
SystemDescriptor harmonic_descriptor() {
  SystemDescriptor d;
  d.name = "harmonic";
  d.anchor = "built-in test system";
  d.chart = CoordChart("harmonic", {"q", "p"});
  d.defaults = {{"omega", 1.0}};
  d.default_state = detail::vec({1.0, 0.0});
  d.build = [](const Params& p) {
    const double w = p.at("omega");
    SystemModel m;
    m.field = detail::make_vector_field(
        "harmonic", 2, [w](const State& s) { return detail::vec({w * s.coords[1], -w * s.coords[0]}); },
        [w](const State&) {
          Mat j(2, 2);
          j << 0.0, w, -w, 0.0;
          return j;
        });
    m.integrals = {{"E", "built-in test system",
                    make_field("E", 2, [](const State& s) { return 0.5 * s.coords.squaredNorm(); },
                               [](const State& s) { return Vec(s.coords); })}};
    return m;
  };
  return d;
}

}  // namespace

const std::vector<SystemDescriptor>& registry() {
  static const std::vector<SystemDescriptor> systems = [] {
    std::vector<SystemDescriptor> out;
    for (auto&& d : detail::lorenz_descriptors()) out.push_back(std::move(d));
    out.push_back(detail::shivamoggi_descriptor());
    out.push_back(detail::raychaudhuri_descriptor());
    for (auto&& d : detail::lu_descriptors()) out.push_back(std::move(d));
    for (auto&& d : detail::qi_descriptors()) out.push_back(std::move(d));
    out.push_back(harmonic_descriptor());
    return out;
  }();
  return systems;
}

const SystemDescriptor& find_system(const std::string& name) {
  const auto& all = registry();
  auto it = std::find_if(all.begin(), all.end(),
                         [&](const SystemDescriptor& d) { return d.name == name; });
  if (it == all.end()) throw UnknownSystemError("unknown system '" + name + "'");
  return *it;
}

Params resolve_params(const SystemDescriptor& desc, const Params& overrides) {
  Params p = desc.defaults;
  for (const auto& [key, value] : overrides) {
    if (!p.count(key))
      throw std::invalid_argument("system '" + desc.name + "' has no parameter '" + key + "'");
    p[key] = value;
  }
  return p;
}

void check_constraints(const SystemDescriptor& desc, const Params& params) {
  for (const auto& c : desc.constraints)
    if (!c.holds(params)) throw ConstraintError(c.description);
}

SystemModel instantiate(const SystemDescriptor& desc, const Params& overrides,
                        Enforce enforce) {
  const Params p = resolve_params(desc, overrides);
  if (enforce == Enforce::strict) check_constraints(desc, p);
  return desc.build(p);
}

Vec eval_field(const std::string& name, const State& s, const Params& overrides) {
  const auto& desc = find_system(name);
  if (s.dim() != desc.chart.dim())
    throw DimensionError("eval_field: state dimension does not match " + name);
  return instantiate(desc, overrides).field(s);
}

nlohmann::json descriptor_json(const SystemDescriptor& desc, const Params& params) {
  nlohmann::json j;
  j["name"] = desc.name;
  j["anchor"] = desc.anchor;
  j["chart"] = {{"name", desc.chart.name()}, {"labels", desc.chart.labels()}};
  if (desc.chart.distinguished())
    j["chart"]["distinguished"] = desc.chart.labels()[*desc.chart.distinguished()];
  j["params"] = params;
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : desc.constraints) j["constraints"].push_back(c.description);
  const SystemModel m = desc.build(params);
  j["integrals"] = nlohmann::json::array();
  for (const auto& f : m.integrals) j["integrals"].push_back(f.name);
  j["candidate_integrals"] = nlohmann::json::array();
  for (const auto& f : m.candidate_integrals) j["candidate_integrals"].push_back(f.name);
  return j;
}

// ---------------------------------------------------------------------------

const std::vector<TransformSpec>& transforms() {
  static const std::vector<TransformSpec> all = [] {
    std::vector<TransformSpec> out;
    for (auto&& t : detail::lorenz_transforms()) out.push_back(std::move(t));
    for (auto&& t : detail::lu_transforms()) out.push_back(std::move(t));
    for (auto&& t : detail::qi_transforms()) out.push_back(std::move(t));
    return out;
  }();
  return all;
}

const TransformSpec& find_transform(const std::string& name) {
  const auto& all = transforms();
  auto it = std::find_if(all.begin(), all.end(),
                         [&](const TransformSpec& t) { return t.name == name; });
  if (it == all.end()) throw std::invalid_argument("unknown transform '" + name + "'");
  return *it;
}

namespace {
Params overlay(const Params& defaults, const Params& overrides) {
  Params p = defaults;
  for (const auto& [k, v] : overrides) p[k] = v;
  return p;
}
}  // namespace

State apply_transform(const std::string& name, const State& s, Direction direction,
                      const Params& overrides) {
  const auto& spec = find_transform(name);
  const Params p = overlay(spec.defaults, overrides);
  return direction == Direction::forward ? spec.forward(s, p) : spec.inverse(s, p);
}

Vec pushforward(const TransformSpec& spec, const State& s, const Params& params, double h) {
  const Params p = overlay(spec.defaults, params);
  const VectorField X = spec.source_field(p);
  const Vec xdot = X(s);
  // Differentiate (image coords, image time) along tau -> (s + tau X, t + tau).
  auto along = [&](double tau) {
    const State m = spec.forward(State(s.coords + tau * xdot, s.t + tau), p);
    Vec out(m.dim() + 1);
    out << m.coords, m.t;
    return out;
  };
  const double step = h * (1.0 + std::abs(s.t));
  const Vec d1 = (along(step) - along(-step)) / (2.0 * step);
  const Vec d2 = (along(0.5 * step) - along(-0.5 * step)) / step;
  const Vec d = (4.0 * d2 - d1) / 3.0;
  const Eigen::Index n = d.size() - 1;
  return d.head(n) / d[n];
}

// ---------------------------------------------------------------------------

const std::vector<ReductionSpec>& reductions() {
  static const std::vector<ReductionSpec> all = [] {
    std::vector<ReductionSpec> out;
    out.push_back(detail::raychaudhuri_reduction());
    for (auto&& r : detail::lu_reductions()) out.push_back(std::move(r));
    out.push_back(detail::qi_reduction());
    return out;
  }();
  return all;
}

const ReductionSpec& find_reduction(const std::string& name) {
  const auto& all = reductions();
  auto it = std::find_if(all.begin(), all.end(),
                         [&](const ReductionSpec& r) { return r.name == name; });
  if (it == all.end()) throw std::invalid_argument("unknown reduction '" + name + "'");
  return *it;
}

PlanarSystem reduce(const std::string& name, const LevelValues& lv, const Params& overrides) {
  const auto& spec = find_reduction(name);
  const auto& ambient = find_system(spec.ambient);
  const Params p = resolve_params(ambient, overrides);
  check_constraints(ambient, p);
  if (spec.validate) spec.validate(lv, p);
  const VectorField X = ambient.build(p).field;
  const auto lift = spec.lift;
  const int ix = spec.x_index, iy = spec.y_index;
  const DomainPredicate domain = spec.domain ? spec.domain(lv) : DomainPredicate{};

  auto component = [=](int index, const std::string& label) {
    ScalarField f;
    f.name = spec.name + "." + label;
    f.dim = 2;
    f.eval = [=](const State& s) {
      return X(State(lift(s.coords[0], s.coords[1], lv, p), s.t))[index];
    };
    f.domain = domain;
    return f;
  };
  PlanarSystem sys;
  sys.name = spec.name;
  const auto& labels = ambient.chart.labels();
  sys.chart = CoordChart(spec.name, {labels[ix], labels[iy]});
  sys.f = component(ix, labels[ix]);
  sys.g = component(iy, labels[iy]);
  sys.autonomous = X.autonomous;
  sys.domain = domain;
  return sys;
}

}  // namespace quadham
