#include "quadham/core.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace quadham {

CoordChart::CoordChart(std::string name, std::vector<std::string> labels,
                       std::optional<int> distinguished)
    : name_(std::move(name)), labels_(std::move(labels)), distinguished_(distinguished) {
  if (labels_.size() < 1 || labels_.size() > 4)
    throw DimensionError("chart '" + name_ + "' must have 1 to 4 coordinates");
  std::set<std::string> unique(labels_.begin(), labels_.end());
  if (unique.size() != labels_.size())
    throw std::invalid_argument("chart '" + name_ + "' has duplicate labels");
  if (distinguished_ && (*distinguished_ < 0 || *distinguished_ >= dim()))
    throw std::invalid_argument("chart '" + name_ + "' distinguished index out of range");
}

std::array<int, 3> CoordChart::spatial_indices() const {
  if (dim() != 4 || !distinguished_)
    throw DimensionError("chart '" + name_ + "' has no (u, x) split");
  std::array<int, 3> out{};
  int k = 0;
  for (int i = 0; i < 4; ++i)
    if (i != *distinguished_) out[k++] = i;
  return out;
}

int CoordChart::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw std::invalid_argument("chart '" + name_ + "' has no coordinate '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

State make_state(std::initializer_list<double> coords, double t) {
  Vec v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  return State(std::move(v), t);
}

Vec ScalarField::gradient(const State& s) const {
  if (grad) return grad(s);
  return grad_fd(*this, s);
}

ScalarField constant_field(int dim, double c, std::string name) {
  ScalarField f;
  f.name = std::move(name);
  f.dim = dim;
  f.eval = [c](const State&) { return c; };
  f.grad = [dim](const State&) { return Vec::Zero(dim).eval(); };
  return f;
}

namespace {

DomainPredicate both(const DomainPredicate& a, const DomainPredicate& b) {
  if (!a) return b;
  if (!b) return a;
  return [a, b](const State& s) { return a(s) && b(s); };
}

void require_same_dim(const ScalarField& f, const ScalarField& g) {
  if (f.dim != g.dim)
    throw DimensionError("field dimension mismatch: " + f.name + " vs " + g.name);
}

}  // namespace

ScalarField linear_combination(double a, const ScalarField& f, double b,
                               const ScalarField& g) {
  require_same_dim(f, g);
  ScalarField out;
  out.name = "lincomb(" + f.name + "," + g.name + ")";
  out.dim = f.dim;
  out.eval = [=](const State& s) { return a * f.value(s) + b * g.value(s); };
  out.grad = [=](const State& s) { return Vec(a * f.gradient(s) + b * g.gradient(s)); };
  if (f.dt || g.dt)
    out.dt = [=](const State& s) { return a * f.time_partial(s) + b * g.time_partial(s); };
  out.domain = both(f.domain, g.domain);
  return out;
}

ScalarField product(const ScalarField& f, const ScalarField& g) {
  require_same_dim(f, g);
  ScalarField out;
  out.name = f.name + "*" + g.name;
  out.dim = f.dim;
  out.eval = [=](const State& s) { return f.value(s) * g.value(s); };
  out.grad = [=](const State& s) {
    return Vec(f.gradient(s) * g.value(s) + f.value(s) * g.gradient(s));
  };
  if (f.dt || g.dt)
    out.dt = [=](const State& s) {
      return f.time_partial(s) * g.value(s) + f.value(s) * g.time_partial(s);
    };
  out.domain = both(f.domain, g.domain);
  return out;
}

ScalarField quotient(const ScalarField& num, const ScalarField& den) {
  require_same_dim(num, den);
  ScalarField out;
  out.name = num.name + "/" + den.name;
  out.dim = num.dim;
  out.eval = [=](const State& s) { return num.value(s) / den.value(s); };
  out.grad = [=](const State& s) {
    const double d = den.value(s);
    return Vec((num.gradient(s) * d - num.value(s) * den.gradient(s)) / (d * d));
  };
  if (num.dt || den.dt)
    out.dt = [=](const State& s) {
      const double d = den.value(s);
      return (num.time_partial(s) * d - num.value(s) * den.time_partial(s)) / (d * d);
    };
  out.domain = both(both(num.domain, den.domain), [den](const State& s) {
    return std::abs(den.value(s)) >= kMinDenominator;
  });
  return out;
}

Vec grad_fd(const ScalarField& field, const State& s, double h) {
  if (s.dim() != field.dim)
    throw DimensionError("grad_fd: state dimension does not match field " + field.name);
  if (!field.contains(s)) throw DomainError("grad_fd: state outside domain of " + field.name);
  auto f = [&field](const State& p) { return field.value(p); };
  Vec g(field.dim);
  for (int i = 0; i < field.dim; ++i) g[i] = richardson_partial(f, s, i, h, field.domain);
  return g;
}

double lie_derivative(const VectorField& X, const ScalarField& F, const State& s) {
  if (X.dim != F.dim || s.dim() != F.dim)
    throw DimensionError("lie_derivative: dimension mismatch between " + X.name + " and " +
                         F.name);
  return F.time_partial(s) + X(s).dot(F.gradient(s));
}

double cofactor_residual(const VectorField& X, const ScalarField& J, const ScalarField& lam,
                         const State& s) {
  return lie_derivative(X, J, s) - lam.value(s) * J.value(s);
}

std::vector<State> sample_states(int dim, std::size_t count, std::uint64_t seed,
                                 const DomainPredicate& accept, const SamplingOptions& opts) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(opts.lo, opts.hi);
  std::uniform_real_distribution<double> time(opts.t_lo, opts.t_hi);
  std::vector<State> out;
  out.reserve(count);
  std::size_t attempts = 0;
  const std::size_t budget = opts.max_attempts_per_sample * std::max<std::size_t>(count, 1);
  while (out.size() < count) {
    if (++attempts > budget)
      throw DomainError("sample_states: acceptance region too small for the sampling box");
    State s(Vec(dim), 0.0);
    for (int i = 0; i < dim; ++i) s.coords[i] = coord(rng);
    s.t = opts.t_hi > opts.t_lo ? time(rng) : opts.t_lo;
    if (!accept || accept(s)) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace quadham
