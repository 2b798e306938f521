#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadham {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat4 = Eigen::Matrix4d;

// Denominators smaller than this are treated as singular by domain guards.
inline constexpr double kMinDenominator = 1e-9;
// arcsin arguments must stay this far inside [-1, 1].
inline constexpr double kArcsinMargin = 1e-12;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered coordinate names. For 4D charts used by the tri-Hamiltonian
/// construction, `distinguished` is the index of the coordinate that plays
/// the role of u in the (u, x) split.
class CoordChart {
 public:
  CoordChart() = default;
  CoordChart(std::string name, std::vector<std::string> labels,
             std::optional<int> distinguished = std::nullopt);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> distinguished() const { return distinguished_; }
  int dim() const { return static_cast<int>(labels_.size()); }

  /// Indices of the three non-distinguished coordinates, in chart order.
  std::array<int, 3> spatial_indices() const;
  int index_of(const std::string& label) const;

  bool operator==(const CoordChart& other) const {
    return labels_ == other.labels_ && distinguished_ == other.distinguished_;
  }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::optional<int> distinguished_;
};

struct State {
  Vec coords;
  double t = 0.0;

  State() = default;
  State(Vec c, double time = 0.0) : coords(std::move(c)), t(time) {}
  int dim() const { return static_cast<int>(coords.size()); }
};

State make_state(std::initializer_list<double> coords, double t = 0.0);

using DomainPredicate = std::function<bool(const State&)>;

/// Real-valued function of state. `grad` is the analytic gradient; when it
/// is left empty the gradient falls back to `grad_fd`. `dt` is the explicit
/// time partial (zero when empty).
struct ScalarField {
  std::string name;
  int dim = 0;
  std::function<double(const State&)> eval;
  std::function<Vec(const State&)> grad;
  std::function<double(const State&)> dt;
  DomainPredicate domain;

  double value(const State& s) const { return eval(s); }
  Vec gradient(const State& s) const;
  double time_partial(const State& s) const { return dt ? dt(s) : 0.0; }
  bool contains(const State& s) const { return !domain || domain(s); }
  bool has_analytic_gradient() const { return static_cast<bool>(grad); }
};

ScalarField constant_field(int dim, double c, std::string name = "const");

/// a*F + b*G with gradients and time partials combined the same way.
ScalarField linear_combination(double a, const ScalarField& f, double b,
                               const ScalarField& g);
ScalarField product(const ScalarField& f, const ScalarField& g);
ScalarField quotient(const ScalarField& num, const ScalarField& den);

struct VectorField {
  std::string name;
  int dim = 0;
  std::function<Vec(const State&)> eval;
  bool autonomous = true;
  // Optional analytic Jacobian d(eval)/d(coords).
  std::function<Mat(const State&)> jacobian;
  DomainPredicate domain;

  Vec operator()(const State& s) const { return eval(s); }
  bool contains(const State& s) const { return !domain || domain(s); }
};

/// Default relative step for the finite-difference oracles.
inline constexpr double kDefaultFdStep = 1e-5;

/// Central-difference gradient with one Richardson extrapolation step.
/// The step for coordinate i is h * (1 + |x_i|). If a stencil point leaves
/// the domain the step is shrunk (up to four times by 10x) before giving up
/// with DomainError.
Vec grad_fd(const ScalarField& field, const State& s, double h = kDefaultFdStep);

/// Central difference of f along the coordinate `index` with Richardson.
/// Shared by the other finite-difference oracles.
template <typename F>
auto richardson_partial(F&& f, const State& s, int index, double h,
                        const DomainPredicate& domain = {})
    -> decltype(f(s));

/// X(F) = dF/dt + X . grad F.
double lie_derivative(const VectorField& X, const ScalarField& F, const State& s);

/// X(J) - lam * J; zero when J is a second integral with cofactor lam.
double cofactor_residual(const VectorField& X, const ScalarField& J,
                         const ScalarField& lam, const State& s);

struct SamplingOptions {
  double lo = -2.0;
  double hi = 2.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t max_attempts_per_sample = 10000;
};

/// Uniform rejection sampling of states against `accept`.
/// Deterministic for a given seed on one platform.
std::vector<State> sample_states(int dim, std::size_t count, std::uint64_t seed,
                                 const DomainPredicate& accept = {},
                                 const SamplingOptions& opts = {});

// ---------------------------------------------------------------------------

template <typename F>
auto richardson_partial(F&& f, const State& s, int index, double h,
                        const DomainPredicate& domain) -> decltype(f(s)) {
  double step = h * (1.0 + std::abs(s.coords[index]));
  for (int attempt = 0; attempt < 5; ++attempt, step *= 0.1) {
    auto shifted = [&](double delta) {
      State p = s;
      p.coords[index] += delta;
      return p;
    };
    const State p1 = shifted(step), m1 = shifted(-step);
    const State p2 = shifted(0.5 * step), m2 = shifted(-0.5 * step);
    if (domain && !(domain(p1) && domain(m1) && domain(p2) && domain(m2))) continue;
    using R = decltype(f(s));
    const R d1 = (f(p1) - f(m1)) / (2.0 * step);
    const R d2 = (f(p2) - f(m2)) / step;
    return R((4.0 * d2 - d1) / 3.0);
  }
  throw DomainError("finite-difference stencil leaves the domain along coordinate " +
                    std::to_string(index));
}

}  // namespace quadham
