#include "quadham/verify.hpp"

#include "quadham/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <random>

namespace quadham {

const char* status_name(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::pass: return "pass";
    case ClaimStatus::fail: return "fail";
    case ClaimStatus::mismatch_reported: return "mismatch-reported";
  }
  return "?";
}

const Claim* VerificationReport::find(const std::string& id) const {
  for (const auto& c : claims)
    if (c.id == id) return &c;
  return nullptr;
}

bool VerificationReport::hard_failure() const { return count(ClaimStatus::fail) > 0; }

std::size_t VerificationReport::count(ClaimStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(claims.begin(), claims.end(), [s](const Claim& c) { return c.status == s; }));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// How a failing claim is classified: construction identities are hard
// failures, statements printed with a system become mismatch reports.
enum class Kind { identity, printed };

class Suite {
 public:
  Suite(std::vector<Claim>& out, double tol_scale) : out_(out), scale_(tol_scale) {}

  // Passes when residual <= tol.
  Claim& upper(std::string id, std::string anchor, double residual, double tol, Kind kind,
               std::string note = {}) {
    tol *= scale_;
    const bool ok = std::isfinite(residual) && residual <= tol;
    return push(std::move(id), std::move(anchor), residual, tol, ok, kind, std::move(note));
  }

  // Passes when residual > threshold (checkers must be able to fail).
  Claim& lower(std::string id, std::string anchor, double residual, double threshold,
               std::string note = {}) {
    const bool ok = std::isfinite(residual) && residual > threshold;
    return push(std::move(id), std::move(anchor), residual, threshold, ok, Kind::identity,
                std::move(note));
  }

  // Runs fn and records its residual; exceptions become a failing claim.
  template <typename F>
  Claim& measure(std::string id, std::string anchor, double tol, Kind kind, F&& fn,
                 std::string note = {}) {
    try {
      return upper(std::move(id), std::move(anchor), fn(), tol, kind, std::move(note));
    } catch (const std::exception& e) {
      return upper(std::move(id), std::move(anchor), kNaN, tol, Kind::identity,
                   std::string("evaluation error: ") + e.what());
    }
  }

 private:
  Claim& push(std::string id, std::string anchor, double residual, double tol, bool ok, Kind kind,
              std::string note) {
    Claim c;
    c.id = std::move(id);
    c.anchor = std::move(anchor);
    c.residual = residual;
    c.tolerance = tol;
    c.status = ok ? ClaimStatus::pass
                  : (kind == Kind::printed ? ClaimStatus::mismatch_reported : ClaimStatus::fail);
    c.note = std::move(note);
    out_.push_back(std::move(c));
    return out_.back();
  }

  std::vector<Claim>& out_;
  double scale_;
};

template <typename F>
double max_over(const std::vector<State>& ss, F&& f) {
  double m = 0.0;
  for (const auto& s : ss) {
    const double v = std::abs(f(s));
    if (!std::isfinite(v)) return kNaN;
    m = std::max(m, v);
  }
  return m;
}

double rel_diff(const Vec& a, const Vec& b) {
  return ((a - b).array().abs() / (1.0 + b.array().abs())).maxCoeff();
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Size of the terms entering N^{a[b} d_a N^{cd]}, used to normalize the
// Jacobi residual where entries grow like inverse powers of a coordinate.
double jacobi_scale(const MatrixField& N, const State& s) {
  double d = 0.0;
  for (int a = 0; a < N.dim; ++a)
    d = std::max(d, max_abs(richardson_partial(N.eval, s, a, kDefaultFdStep, N.domain)));
  return 1.0 + max_abs(N(s)) * d;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }

 private:
  std::mt19937_64 g_;
};

DomainPredicate all_of(std::vector<DomainPredicate> preds) {
  return [preds = std::move(preds)](const State& s) {
    for (const auto& p : preds)
      if (p && !p(s)) return false;
    return true;
  };
}

std::vector<State> draw(const SystemDescriptor& d, const SystemModel& m, std::size_t n,
                        std::uint64_t seed) {
  std::vector<DomainPredicate> preds{m.sample_domain, m.field.domain};
  for (const auto& f : m.integrals) preds.push_back(f.field.domain);
  for (const auto& f : m.candidate_integrals) preds.push_back(f.field.domain);
  for (const auto& st : m.structures) {
    preds.push_back(st.structure.domain);
    preds.push_back(st.hamiltonian.domain);
    if (st.conformal) preds.push_back(st.conformal->domain);
  }
  return sample_states(d.chart.dim(), n, seed, all_of(std::move(preds)), m.sampling);
}

// ---------------------------------------------------------------------------
// Generic per-model checks.

void check_field_jacobian(Suite& suite, const SystemModel& m, const std::vector<State>& ss) {
  if (!m.field.jacobian) return;
  suite.measure("field.jacobian_oracle", "field Jacobian vs central differences", 1e-6,
                Kind::identity, [&] {
                  return max_over(ss, [&](const State& s) {
                    const Mat a = m.field.jacobian(s), f = jacobian_fd(m.field, s, 1e-5);
                    return ((a - f).array().abs() / (1.0 + a.array().abs())).maxCoeff();
                  });
                });
}

void check_gradient(Suite& suite, const std::string& id, const ScalarField& f,
                    const std::vector<State>& ss) {
  if (!f.has_analytic_gradient()) return;
  suite.measure("gradient." + id, "analytic gradient vs finite differences", 1e-6, Kind::identity,
                [&] {
                  return max_over(ss, [&](const State& s) {
                    if (!f.contains(s)) return 0.0;
                    return rel_diff(f.gradient(s), grad_fd(f, s));
                  });
                });
}

void check_integrals(Suite& suite, const SystemModel& m, const std::vector<State>& ss) {
  for (const auto& I : m.integrals) {
    suite.measure("integral." + I.name + ".conserved", I.anchor, 1e-10, Kind::identity, [&] {
      return max_over(ss, [&](const State& s) { return lie_derivative(m.field, I.field, s); });
    });
    check_gradient(suite, I.name, I.field, ss);
  }
  for (const auto& I : m.candidate_integrals) {
    suite.measure("candidate." + I.name + ".conserved", I.anchor, 1e-10, Kind::printed, [&] {
      return max_over(ss, [&](const State& s) { return lie_derivative(m.field, I.field, s); });
    });
    check_gradient(suite, I.name, I.field, ss);
  }
  for (const auto& D : m.darboux) {
    suite.measure("darboux." + D.name, "second integral with cofactor", 1e-10, Kind::identity, [&] {
      return max_over(ss, [&](const State& s) {
        return cofactor_residual(m.field, D.polynomial, D.cofactor, s);
      });
    });
    check_gradient(suite, D.name, D.polynomial, ss);
  }
}

nlohmann::json displayed_table(const DisplayedUV& d, const PoissonUV& p,
                               const std::vector<State>& ss, double& worst) {
  const char* names[6] = {"U1", "U2", "U3", "V1", "V2", "V3"};
  nlohmann::json table = nlohmann::json::object();
  worst = 0.0;
  for (int c = 0; c < 6; ++c) {
    double diff = 0.0;
    std::vector<double> ratios;
    for (const auto& s : ss) {
      const double shown = c < 3 ? d.U(s)[c] : d.V(s)[c - 3];
      const double built = c < 3 ? p.U(s)[c] : p.V(s)[c - 3];
      diff = std::max(diff, std::abs(shown - built) / (1.0 + std::abs(built)));
      if (std::abs(built) > 1e-8) ratios.push_back(shown / built);
    }
    nlohmann::json row;
    row["max_rel_diff"] = diff;
    row["status"] = diff <= 1e-8 ? "match" : "mismatch";
    if (diff > 1e-8 && !ratios.empty()) {
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      if (*hi - *lo <= 1e-8 * (1.0 + std::abs(*lo))) row["constant_ratio"] = *lo;
    }
    table[names[c]] = row;
    worst = std::max(worst, diff);
  }
  return table;
}

void check_structures(Suite& suite, const SystemModel& m, const std::vector<State>& ss,
                      std::uint64_t seed) {
  const auto& S = m.structures;
  if (S.empty()) return;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto& st = S[i];
    const PoissonUV& p = st.structure;
    const MatrixField N = as_matrix_field(p);
    const std::string base = "structure." + st.name;
    suite.measure(base + ".degeneracy", "U.V = 0", 1e-12, Kind::identity, [&] {
      return max_over(ss, [&](const State& s) {
        return degeneracy(p, s) / (1.0 + p.U(s).norm() * p.V(s).norm());
      });
    }, "scaled by 1 + |U||V|");
    suite.measure(base + ".jacobi_uv", "scalar and vector Jacobi conditions", 1e-6, Kind::identity,
                  [&] {
                    return max_over(ss, [&](const State& s) {
                      return jacobi_residual_uv(p, s).max_abs() / jacobi_scale(N, s);
                    });
                  },
                  "scaled by 1 + max|N| max|dN|");
    suite.measure(base + ".jacobi_bruteforce", "N^{a[b} d_a N^{cd]} = 0", 1e-5, Kind::identity, [&] {
      return max_over(ss, [&](const State& s) {
        return jacobi_residual_bruteforce(N, s) / jacobi_scale(N, s);
      });
    }, "scaled by 1 + max|N| max|dN|");
    for (std::size_t j = 0; j < S.size(); ++j) {
      if (j == i) continue;
      const ScalarField& C = S[j].hamiltonian;
      suite.measure(base + ".casimir." + C.name, "N grad H_j = 0 for the generating pair", 1e-12,
                    Kind::identity, [&] {
                      return max_over(ss, [&](const State& s) {
                        const Mat4 n = assemble_matrix(p, s);
                        return (n * C.gradient(s)).cwiseAbs().maxCoeff() /
                               (1.0 + max_abs(n) * C.gradient(s).cwiseAbs().maxCoeff());
                      });
                    },
                    "scaled by 1 + max|N| max|grad H|");
    }
    suite.measure(base + ".self_conservation", "grad H . N grad H = 0", 1e-12, Kind::identity, [&] {
      return max_over(ss, [&](const State& s) {
        const Vec g = st.hamiltonian.gradient(s);
        const Mat4 n = assemble_matrix(p, s);
        return g.dot(n * g) / (1.0 + max_abs(n) * g.squaredNorm());
      });
    }, "scaled by 1 + max|N| |grad H|^2");
    if (st.conformal) {
      const ScalarField theta = *st.conformal;
      Claim& c = suite.measure(base + ".conformal_match", "X = theta N grad H", 1e-8, Kind::printed,
                               [&] {
                                 return max_over(ss, [&](const State& s) {
                                   return conformal_match(m.field, p, st.hamiltonian, theta, s) /
                                          (1.0 + m.field(s).cwiseAbs().maxCoeff());
                                 });
                               },
                               "relative to 1 + max|X|");
      if (c.status != ClaimStatus::pass) {
        // Ratio X / (N grad H) where defined, to state what factor would work.
        std::vector<double> ratios;
        for (const auto& s : ss) {
          const Vec x = m.field(s), y = hamiltonian_vector_field(p, st.hamiltonian, s);
          Eigen::Index k;
          y.cwiseAbs().maxCoeff(&k);
          if (std::abs(y[k]) > 1e-8) ratios.push_back(x[k] / y[k] / theta.value(s));
        }
        if (!ratios.empty()) {
          const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
          c.details["ratio_to_stated_factor_min"] = *lo;
          c.details["ratio_to_stated_factor_max"] = *hi;
        }
      }
    }
    check_gradient(suite, st.name + ".hamiltonian", st.hamiltonian, ss);
    if (st.conformal) check_gradient(suite, st.name + ".conformal", *st.conformal, ss);

    // Conformal invariance: multiply by a smooth positive function.
    ScalarField bump = make_field(
        "bump", 4,
        [](const State& s) { return 1.5 + std::sin(s.coords[1]) * std::cos(s.coords[0]); },
        [](const State& s) {
          return Vec((Vec(4) << -std::sin(s.coords[1]) * std::sin(s.coords[0]),
                      std::cos(s.coords[1]) * std::cos(s.coords[0]), 0.0, 0.0)
                         .finished());
        });
    const PoissonUV scaled_p = scaled(p, bump);
    suite.measure(base + ".conformal_invariance", "degenerate structure times a function", 1e-5,
                  Kind::identity, [&] {
                    const MatrixField Ns = as_matrix_field(scaled_p);
                    return max_over(ss, [&](const State& s) {
                      return jacobi_residual_uv(scaled_p, s).max_abs() / jacobi_scale(Ns, s);
                    });
                  },
                  "scaled by 1 + max|N| max|dN|");
  }

  // Compatibility and pencils.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t pencil_samples = std::min<std::size_t>(ss.size(), 20);
  const std::vector<State> few(ss.begin(), ss.begin() + static_cast<long>(pencil_samples));
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      const std::string id = "compat.L" + std::to_string(i + 1) + std::to_string(j + 1);
      suite.measure(id, "U_i.V_j + U_j.V_i = 0", 1e-10, Kind::identity, [&] {
        return max_over(ss, [&](const State& s) {
          const auto& a = S[i].structure;
          const auto& b = S[j].structure;
          return compatibility_lambda(a, b, s) /
                 (1.0 + a.U(s).norm() * b.V(s).norm() + b.U(s).norm() * a.V(s).norm());
        });
      }, "scaled by 1 + |U_i||V_j| + |U_j||V_i|");
      suite.measure("pencil.N" + std::to_string(i + 1) + std::to_string(j + 1),
                    "N_i + c N_j is Poisson", 1e-5, Kind::identity, [&] {
                      double worst = 0.0;
                      for (int k = 0; k < 10; ++k) {
                        const PoissonUV pen = pencil(S[i].structure, rng.uniform(-2.0, 2.0), S[j].structure);
                        const MatrixField Np = as_matrix_field(pen);
                        worst = std::max(worst, max_over(few, [&](const State& s) {
                                           return jacobi_residual_uv(pen, s).max_abs() /
                                                  jacobi_scale(Np, s);
                                         }));
                      }
                      return worst;
                    },
                    "10 random c in [-2, 2]");
    }

  // Hamilton's equations in expanded cross-product form for N3 = N[H1, H2].
  if (S.size() == 3) {
    const auto& chart = S[2].structure.chart;
    suite.measure("hamiltonian_field.expanded_form", "matrix form vs cross-product form", 1e-10,
                  Kind::identity, [&] {
                    return max_over(ss, [&](const State& s) {
                      const Vec a = hamiltonian_vector_field(S[2].structure, S[2].hamiltonian, s);
                      const Vec b = expanded_hamiltonian_field(S[0].hamiltonian, S[1].hamiltonian,
                                                               S[2].hamiltonian, chart, s);
                      return (a - b).cwiseAbs().maxCoeff() / (1.0 + a.cwiseAbs().maxCoeff());
                    });
                  });
  }

  // Checkers must be able to fail: flip the largest V component of N1.
  {
    const PoissonUV& p = S[0].structure;
    Eigen::Index k = 0;
    p.V(ss.front()).cwiseAbs().maxCoeff(&k);
    const PoissonUV bad = corrupted(p, static_cast<int>(k));
    const MatrixField Nb = as_matrix_field(bad);
    double uv = 0.0, bf = 0.0;
    for (const auto& s : ss) {
      uv = std::max(uv, jacobi_residual_uv(bad, s).max_abs());
      bf = std::max(bf, jacobi_residual_bruteforce(Nb, s));
    }
    Claim& c = suite.lower("negative.corrupted_jacobi", "flipped V component must break Jacobi",
                           std::min(uv, bf), 1e-2, "minimum of the two oracles");
    c.details["uv"] = uv;
    c.details["bruteforce"] = bf;
  }

  for (const auto& d : m.displayed) {
    auto it = std::find_if(S.begin(), S.end(), [&](const auto& st) { return st.name == d.name; });
    if (it == S.end()) continue;
    double worst = 0.0;
    nlohmann::json table = displayed_table(d, it->structure, ss, worst);
    Claim& c = suite.upper("displayed." + d.name, d.anchor, worst, 1e-8, Kind::printed,
                           "printed U, V vs constructed");
    c.details = std::move(table);
  }
}

// ---------------------------------------------------------------------------
// Transforms.

void check_transform(Suite& suite, const std::string& name, const Params& user,
                     std::size_t n, std::uint64_t seed, double t_lo, double t_hi,
                     const std::function<Vec(const State&)>& target, double tol, Kind kind,
                     std::string note = {}) {
  const auto& spec = find_transform(name);
  Params p = spec.defaults;
  for (const auto& [k, v] : user)
    if (p.count(k)) p[k] = v;
  const int dim = spec.source_field(p).dim;
  SamplingOptions opts;
  opts.t_lo = t_lo;
  opts.t_hi = t_hi;
  const auto ss = sample_states(dim, n, seed, {}, opts);
  suite.measure("transform." + name + ".roundtrip", spec.anchor, 1e-12, Kind::identity, [&] {
    return max_over(ss, [&](const State& s) {
      const State back = spec.inverse(spec.forward(s, p), p);
      Vec a(dim + 1), b(dim + 1);
      a << back.coords, back.t;
      b << s.coords, s.t;
      return rel_diff(a, b);
    });
  });
  if (!target) return;
  double reversed = 0.0;
  Claim& c = suite.measure("transform." + name + ".pushforward", spec.anchor, tol, kind, [&] {
    return max_over(ss, [&](const State& s) {
      const State img = spec.forward(s, p);
      const Vec pf = pushforward(spec, s, p);
      const Vec x = target(img);
      reversed = std::max(reversed, rel_diff(pf, Vec(-x)));
      return rel_diff(pf, x);
    });
  }, std::move(note));
  if (c.status != ClaimStatus::pass) c.details["residual_vs_time_reversed_target"] = reversed;
}

// ---------------------------------------------------------------------------
// Planar reductions and multipliers.

struct PlanarSample {
  LevelValues lv;
  State s;
};

// Level values in [0.5, 2]; y-like coordinate kept inside (-0.95, 0.95) sqrt(tau)
// when `bounded_y`, otherwise in [-2, 2].
std::vector<PlanarSample> planar_samples(std::size_t n, std::uint64_t seed, bool bounded_y,
                                         double t_lo, double t_hi,
                                         const std::function<bool(const PlanarSample&)>& accept = {}) {
  Rng rng(seed);
  std::vector<PlanarSample> out;
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 1000 * n) throw std::runtime_error("planar_samples: acceptance region too small");
    PlanarSample ps;
    ps.lv.kappa = rng.uniform(0.5, 2.0);
    ps.lv.tau = rng.uniform(0.5, 2.0);
    const double x = rng.uniform(-2.0, 2.0);
    const double y = bounded_y ? std::sqrt(ps.lv.tau) * rng.uniform(-0.95, 0.95) : rng.uniform(-2.0, 2.0);
    ps.s = State((Vec(2) << x, y).finished(), t_hi > t_lo ? rng.uniform(t_lo, t_hi) : t_lo);
    if (!accept || accept(ps)) out.push_back(ps);
  }
  return out;
}

template <typename F>
double max_planar(const std::vector<PlanarSample>& ss, F&& f) {
  double m = 0.0;
  for (const auto& ps : ss) {
    const double v = std::abs(f(ps));
    if (!std::isfinite(v)) return kNaN;
    m = std::max(m, v);
  }
  return m;
}

void check_reduction_matches_displayed(Suite& suite, const std::string& name, const Params& params,
                                       const std::vector<PlanarSample>& ss) {
  const auto& spec = find_reduction(name);
  suite.measure("reduction." + name + ".derived_vs_printed", spec.anchor, 1e-10, Kind::printed, [&] {
    return max_planar(ss, [&](const PlanarSample& ps) {
      const PlanarSystem a = reduce(name, ps.lv, params);
      const PlanarSystem b = spec.displayed(ps.lv, params);
      return std::max(std::abs(a.f.value(ps.s) - b.f.value(ps.s)) / (1.0 + std::abs(b.f.value(ps.s))),
                      std::abs(a.g.value(ps.s) - b.g.value(ps.s)) / (1.0 + std::abs(b.g.value(ps.s))));
    });
  });
}

// Flow (f, g) compared against the printed one and its time reverse.
void compare_planar(Suite& suite, const std::string& id, const std::string& anchor,
                    const std::vector<PlanarSample>& ss,
                    const std::function<PlanarSystem(const LevelValues&)>& derived,
                    const std::function<PlanarSystem(const LevelValues&)>& printed, double tol) {
  double reversed = 0.0;
  Claim& c = suite.measure(id, anchor, tol, Kind::printed, [&] {
    return max_planar(ss, [&](const PlanarSample& ps) {
      const PlanarSystem a = derived(ps.lv), b = printed(ps.lv);
      const Vec va = (Vec(2) << a.f.value(ps.s), a.g.value(ps.s)).finished();
      const Vec vb = (Vec(2) << b.f.value(ps.s), b.g.value(ps.s)).finished();
      reversed = std::max(reversed, rel_diff(va, Vec(-vb)));
      return rel_diff(va, vb);
    });
  });
  if (c.status != ClaimStatus::pass) c.details["residual_vs_time_reversed"] = reversed;
}

// ---------------------------------------------------------------------------
// Per-system suites.

Params merged(const SystemDescriptor& d, const Params& user) { return resolve_params(d, user); }

void lorenz_suite(Suite& suite, const std::string& name, const SystemModel& m,
                  const std::vector<State>& ss, const VerifyConfig& cfg) {
  const auto pair = lorenz::displayed_pair(name);
  const VectorField& X = m.field;
  const std::string tag = name == "lorenz_rho0" ? "Eq. (j1)" : "Eq. (j1l)";

  suite.measure("bihamiltonian.N1_gradH2", tag, 1e-10, Kind::printed, [&] {
    return max_over(ss, [&](const State& s) {
      return (X(s) - pair.n1(s) * pair.h2.gradient(s)).cwiseAbs().maxCoeff();
    });
  });
  suite.measure("bihamiltonian.N2_gradH1", tag, 1e-10, Kind::printed, [&] {
    return max_over(ss, [&](const State& s) {
      return (X(s) - pair.n2(s) * pair.h1.gradient(s)).cwiseAbs().maxCoeff();
    });
  });
  for (const auto* n : {&pair.n1, &pair.n2}) {
    suite.measure("jacobi3d." + n->name, "Jacobi identity, 3D", 1e-5, Kind::identity, [&] {
      return max_over(ss, [&](const State& s) { return jacobi_residual_bruteforce(*n, s); });
    });
    suite.measure("antisymmetry." + n->name, "N + N^T = 0", 0.0, Kind::identity, [&] {
      return max_over(ss, [&](const State& s) { return max_abs((*n)(s) + (*n)(s).transpose()); });
    });
  }
  Rng rng(cfg.seed + 11);
  suite.measure("jacobi3d.pencil", "N1 + c N2 is Poisson", 1e-5, Kind::identity, [&] {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const MatrixField pen = pencil(pair.n1, rng.uniform(-2.0, 2.0), pair.n2);
      worst = std::max(worst, max_over(ss, [&](const State& s) { return jacobi_residual_bruteforce(pen, s); }));
    }
    return worst;
  }, "10 random c in [-2, 2]");

  // Normalization of the compact formula relative to the printed matrices.
  const ThreeDPair formula = build_3d_pair(pair.h1, pair.h2);
  double num = 0.0, den = 0.0;
  for (const auto& s : ss) {
    const Vec y = formula.from_h2(s) * pair.h1.gradient(s);
    num += X(s).dot(y);
    den += y.dot(y);
  }
  const double c = den > 0.0 ? num / den : kNaN;
  {
    Claim& cl = suite.measure("formula3d.pairing", "3D formula N^(i)ab = -eps^ij eps^abc d_c H_j",
                              1e-10, Kind::identity, [&] {
                                return max_over(ss, [&](const State& s) {
                                  const Vec a = c * (formula.from_h2(s) * pair.h1.gradient(s));
                                  const Vec b = c * (formula.from_h1(s) * pair.h2.gradient(s));
                                  return std::max((X(s) - a).cwiseAbs().maxCoeff(),
                                                  (X(s) - b).cwiseAbs().maxCoeff());
                                });
                              },
                              "matrix built from H_j applied to the gradient of the other one, at the fitted normalization");
    cl.details["normalization"] = c;
    // Which formula matrix the printed N1 equals.
    double d1 = 0.0, d2 = 0.0;
    for (const auto& s : ss) {
      d1 = std::max(d1, max_abs(pair.n1(s) - c * formula.from_h2(s)));
      d2 = std::max(d2, max_abs(pair.n1(s) - c * formula.from_h1(s)));
    }
    cl.details["printed_N1_equals"] = d1 <= 1e-10 ? "formula i=1 (from H2)"
                                      : d2 <= 1e-10 ? "formula i=2 (from H1)"
                                                    : "neither";
  }
  suite.upper("formula3d.normalization", tag, std::abs(c - 1.0), 1e-12, Kind::printed,
              "printed matrices divided by the compact formula");

  double r12 = 0.0, r21 = 0.0;
  for (const auto& s : ss) {
    const Vec3 n12 = nambu_field(pair.h1, pair.h2, s);
    r12 = std::max(r12, (X(s) - Vec(c * n12)).cwiseAbs().maxCoeff());
    r21 = std::max(r21, (X(s) + Vec(c * n12)).cwiseAbs().maxCoeff());
  }
  const bool one = (r12 <= 1e-10) != (r21 <= 1e-10);
  Claim& nb = suite.upper("nambu.ordering", "Eq. (nambu)", one ? std::min(r12, r21) : std::max(r12, r21),
                          1e-10, Kind::identity, "exactly one ordering must reproduce X");
  nb.details["normalization"] = c;
  nb.details["residual_H1xH2"] = r12;
  nb.details["residual_H2xH1"] = r21;
  nb.details["matching_ordering"] = r12 <= 1e-10 ? "grad H1 x grad H2"
                                    : r21 <= 1e-10 ? "grad H2 x grad H1"
                                                   : "none";

  if (name == "lorenz_rho0") {
    check_transform(suite, "lorenz_rho0_map", {}, std::min<std::size_t>(cfg.samples, 100), cfg.seed + 3,
                    0.0, 1.0, [&](const State& s) { return X(s); }, 1e-7, Kind::printed,
                    "raw Lorenz (sigma = 1/2, rho = 0, beta = 1) pushed forward");
  } else {
    // Scaling limit: residual shrinks like epsilon = (sigma rho)^(-1/2).
    const auto& spec = find_transform("lorenz_scaling");
    Params p = spec.defaults;
    double prev = 0.0;
    nlohmann::json series = nlohmann::json::array();
    bool decreasing = true;
    double last = 0.0, first_ratio = -1.0;
    for (double rho : {1e4, 1e6, 1e8}) {
      p["rho"] = rho;
      const double eps = 1.0 / std::sqrt(p["sigma"] * rho);
      double worst = 0.0;
      for (const auto& s : ss) {
        // Sample in the scaled chart, map back, push forward.
        const State src = spec.inverse(s, p);
        worst = std::max(worst, rel_diff(pushforward(spec, src, p), X(s)));
      }
      series.push_back({{"rho", rho}, {"epsilon", eps}, {"residual", worst}});
      if (prev > 0.0 && !(worst < prev)) decreasing = false;
      prev = worst;
      last = worst / eps;
      if (first_ratio < 0.0) first_ratio = last;
    }
    Claim& cl = suite.upper("transform.lorenz_scaling.limit", spec.anchor, prev, 1e-3, Kind::identity,
                            "residual at rho = 1e8; must shrink with rho like epsilon");
    if (!decreasing || !(std::abs(last - first_ratio) <= 0.01 * first_ratio)) cl.status = ClaimStatus::fail;
    cl.details["residual_over_epsilon"] = last;
    cl.details["series"] = series;
  }
}

void shivamoggi_suite(Suite& suite, const SystemModel& m, const std::vector<State>& ss) {
  const HamiltonianStructure ex = shivamoggi::extra_structure();
  suite.measure("extra.degeneracy", "U = (0, y, 0), V = (-x, 0, -2u)", 1e-12, Kind::identity, [&] {
    return max_over(ss, [&](const State& s) { return degeneracy(ex.structure, s); });
  });
  suite.measure("extra.jacobi_uv", "U = (0, y, 0), V = (-x, 0, -2u)", 1e-8, Kind::printed, [&] {
    return max_over(ss, [&](const State& s) { return jacobi_residual_uv(ex.structure, s).max_abs(); });
  });
  double num = 0.0, den = 0.0;
  for (const auto& s : ss) {
    const Vec y = hamiltonian_vector_field(ex.structure, ex.hamiltonian, s);
    num += m.field(s).dot(y);
    den += y.dot(y);
  }
  const double c = den > 0.0 ? num / den : 0.0;
  double fitted = 0.0;
  Claim& cl = suite.measure("extra.hamilton_equations", "H = H1 - H2, X = N grad H", 1e-10, Kind::printed, [&] {
    return max_over(ss, [&](const State& s) {
      const Vec y = hamiltonian_vector_field(ex.structure, ex.hamiltonian, s);
      fitted = std::max(fitted, (m.field(s) - c * y).cwiseAbs().maxCoeff());
      return (m.field(s) - y).cwiseAbs().maxCoeff();
    });
  });
  cl.details["best_constant_factor"] = c;
  cl.details["residual_at_best_factor"] = fitted;
}

void raychaudhuri_suite(Suite& suite, const SystemModel& m, const std::vector<State>& ss,
                        const VerifyConfig& cfg) {
  const ScalarField fit = raychaudhuri::fitted_conformal();
  for (const auto& st : m.structures) {
    suite.measure("structure." + st.name + ".conformal_fitted", "factor reproducing X (2 z u^3)", 1e-8,
                  Kind::identity, [&] {
                    return max_over(ss, [&](const State& s) {
                      return conformal_match(m.field, st.structure, st.hamiltonian, fit, s) /
                             (1.0 + m.field(s).cwiseAbs().maxCoeff());
                    });
                  });
  }

  const Params none;
  auto z_ok = [](const PlanarSample& ps) { return std::abs(ps.s.coords[1]) >= 0.1; };
  const auto ps = planar_samples(cfg.samples, cfg.seed + 21, false, 0.0, 0.0, z_ok);
  check_reduction_matches_displayed(suite, "raychaudhuri_reduced", none, ps);
  suite.measure("jlm.raychaudhuri.multiplier_pde", "M = 1/z^2", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      return multiplier_pde_residual(reduce("raychaudhuri_reduced", p.lv), raychaudhuri::reduced_bundle(p.lv).M, p.s);
    });
  });
  suite.measure("jlm.raychaudhuri.hamiltonian_consistency", "Eq. (HonRay)", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      const auto b = raychaudhuri::reduced_bundle(p.lv);
      return hamiltonian_consistency(reduce("raychaudhuri_reduced", p.lv), b.M, b.H, p.s).max_abs();
    });
  });
  suite.measure("jlm.raychaudhuri.canonical_jacobian", "Q = x, P = -1/z", 1e-10, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      const auto b = raychaudhuri::reduced_bundle(p.lv);
      return canonical_jacobian_check(b.M, *b.Q, *b.P, p.s);
    });
  });
  suite.measure("jlm.raychaudhuri.H_conserved", "Eq. (HonRay)", 1e-10, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      const auto& spec = find_reduction("raychaudhuri_reduced");
      const VectorField Xp = spec.displayed(p.lv, none).as_vector_field();
      return lie_derivative(Xp, raychaudhuri::reduced_bundle(p.lv).H, p.s);
    });
  });
  // H3 on the level set is a constant multiple of the reduced H.
  {
    double spread = 0.0;
    nlohmann::json ratios = nlohmann::json::array();
    const ScalarField H3 = m.integrals[2].field;
    const auto& spec = find_reduction("raychaudhuri_reduced");
    for (std::size_t k = 0; k < std::min<std::size_t>(ps.size(), 20); ++k) {
      const LevelValues lv = ps[k].lv;
      const auto b = raychaudhuri::reduced_bundle(lv);
      Rng rng(cfg.seed + 100 + k);
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int j = 0; j < 10; ++j) {
        const State s((Vec(2) << rng.uniform(-2, 2), rng.uniform(0.2, 2.0)).finished());
        const double h = b.H.value(s);
        if (std::abs(h) < 1e-3) continue;
        const double r = H3.value(State(spec.lift(s.coords[0], s.coords[1], lv, none))) / h;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      spread = std::max(spread, (hi - lo) / (1.0 + std::abs(lo)));
      if (k < 3) ratios.push_back({{"kappa", lv.kappa}, {"tau", lv.tau}, {"ratio", lo}, {"minus_kappa_over_2", -0.5 * lv.kappa}});
    }
    Claim& c = suite.upper("jlm.raychaudhuri.H3_multiple", "reduced H is a multiple of H3", spread, 1e-8,
                           Kind::printed, "spread of H3 / H per level set");
    c.details["examples"] = ratios;
  }

  // Fourth structure: the stated scalar condition, and whether it reproduces X.
  Rng rng(cfg.seed + 31);
  std::vector<std::array<double, 3>> lmn;
  for (std::size_t k = 0; k < ss.size(); ++k) {
    const double l = rng.uniform(-1, 1), mm = rng.uniform(-1, 1);
    lmn.push_back({l, mm, raychaudhuri::fourth_condition_solve_n(l, mm, ss[k])});
  }
  suite.measure("fourth.condition", "condition on (l, m, n)", 1e-10, Kind::identity, [&] {
    double w = 0.0;
    for (std::size_t k = 0; k < ss.size(); ++k) {
      const State& s = ss[k];
      const double H1 = m.integrals[0].field.value(s), H2 = m.integrals[1].field.value(s),
                   H3 = m.integrals[2].field.value(s);
      const double u = s.coords[0], z = s.coords[3];
      const double size = 8.0 / std::abs(z * u * u * u) *
                          (std::abs(lmn[k][0] * H2 * H3) + std::abs(lmn[k][1] * H1 * H3) + std::abs(lmn[k][2] * H1 * H2));
      w = std::max(w, std::abs(raychaudhuri::fourth_condition_residual(lmn[k][0], lmn[k][1], lmn[k][2], s)) / (1.0 + size));
    }
    return w;
  }, "n solved from the condition for random l, m; scaled by the size of its terms");
  suite.measure("fourth.flow_reproduction", "N = l N1 + m N2 + n N3 with H4", 1e-8, Kind::printed, [&] {
    double w = 0.0;
    for (std::size_t k = 0; k < ss.size(); ++k)
      w = std::max(w, raychaudhuri::fourth_flow_residual(lmn[k][0], lmn[k][1], lmn[k][2], ss[k]) /
                          (1.0 + m.field(ss[k]).cwiseAbs().maxCoeff()));
    return w;
  }, "report only; the condition is checked as stated");
}

void lu_original_suite(Suite& suite, const Params& params, const VerifyConfig& cfg) {
  // Constraint detector: break gamma = delta and I1 is no longer conserved.
  Params bad = params;
  bad["gamma"] = 1.0;
  bad["delta"] = 2.0;
  const auto& d = find_system("lu_original");
  const SystemModel mb = instantiate(d, bad, Enforce::none);
  const auto ss = sample_states(4, std::min<std::size_t>(cfg.samples, 100), cfg.seed + 5, {}, mb.sampling);
  suite.lower("negative.constraint_detector", "I1 drifts when gamma != delta",
              max_over(ss, [&](const State& s) { return lie_derivative(mb.field, mb.integrals[0].field, s); }),
              1e-3);
  check_transform(suite, "lu_cov", params, std::min<std::size_t>(cfg.samples, 100), cfg.seed + 6, 0.0, 1.0,
                  [&](const State& s) { return instantiate(find_system("lu_transformed"), params).field(s); },
                  1e-7, Kind::printed);
}

void lu_transformed_suite(Suite& suite, const Params& params, const VerifyConfig& cfg) {
  const auto ps = planar_samples(cfg.samples, cfg.seed + 41, true, 0.0, 1.0);
  check_reduction_matches_displayed(suite, "lu_reduced", params, ps);
  auto red = [&](const LevelValues& lv) { return reduce("lu_reduced", lv, params); };
  suite.measure("jlm.lu.multiplier_pde", "M = (tau - q^2)^(-1/2)", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      return multiplier_pde_residual(red(p.lv), lu::reduced_bundle(p.lv, params).M, p.s);
    });
  });
  suite.measure("jlm.lu.timedep_hamiltonian", "Eq. (HamLu1)", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      const auto b = lu::reduced_bundle(p.lv, params);
      return timedep_hamiltonian_consistency(red(p.lv), b.M, *b.psi, *b.phi, b.H, p.s).max_abs();
    });
  });
  suite.measure("jlm.lu.dHdt_equals_partial", "dH/dt = dH/dt (explicit)", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      return total_minus_partial_time_derivative(red(p.lv), lu::reduced_bundle(p.lv, params).H, p.s);
    });
  });
  {
    double abs_gap = 0.0;
    Claim& c = suite.measure("jlm.lu.canonical_jacobian", "Q = arcsin(q / sqrt(tau)), P = p", 1e-10,
                             Kind::printed, [&] {
                               return max_planar(ps, [&](const PlanarSample& p) {
                                 const auto b = lu::reduced_bundle(p.lv, params);
                                 const double r = canonical_jacobian_check(b.M, *b.Q, *b.P, p.s);
                                 abs_gap = std::max(abs_gap, std::abs(std::abs(r + b.M.value(p.s)) - b.M.value(p.s)));
                                 return r;
                               });
                             },
                             "determinant taken in the (p, q) order");
    c.details["abs_det_minus_M"] = abs_gap;
  }

  // Canonical form. Samples on |Q| < 1.4.
  const auto cs = planar_samples(cfg.samples, cfg.seed + 42, false, 0.0, 1.0, [](const PlanarSample& p) {
    return std::abs(p.s.coords[0]) < 1.4;
  });
  suite.measure("canonical.lu.hamilton_minus_convention", "Eq. (Lu2DCan) with Eq. (HamLu2)", 1e-8,
                Kind::printed, [&] {
                  return max_planar(cs, [&](const PlanarSample& p) {
                    return hamilton_equations_residual(lu::canonical_displayed(p.lv, params),
                                                       lu::canonical_hamiltonian(p.lv, params), p.s)
                        .max_abs();
                  });
                },
                "dQ/dt = dH/dP, dP/dt = -dH/dQ");
  suite.measure("canonical.lu.hamilton_plus_convention", "text: dP/dt = dH/dQ", 1e-8, Kind::printed, [&] {
    return max_planar(cs, [&](const PlanarSample& p) {
      const auto sys = lu::canonical_displayed(p.lv, params);
      const Vec g = lu::canonical_hamiltonian(p.lv, params).gradient(p.s);
      return std::max(std::abs(sys.f.value(p.s) - g[1]), std::abs(sys.g.value(p.s) - g[0]));
    });
  }, "dP/dt = +dH/dQ as written in the text");
  compare_planar(suite, "canonical.lu.pushforward_vs_printed", "Eq. (Lu2DCan)", cs,
                 [&](const LevelValues& lv) { return lu::canonical_pushforward(lv, params); },
                 [&](const LevelValues& lv) { return lu::canonical_displayed(lv, params); }, 1e-7);
}

void lu_autonomous_suite(Suite& suite, const Params& params, const VerifyConfig& cfg) {
  const auto ps = planar_samples(cfg.samples, cfg.seed + 51, true, 0.0, 0.0);
  check_reduction_matches_displayed(suite, "lu_autonomous_reduced", params, ps);
  auto red = [&](const LevelValues& lv) { return reduce("lu_autonomous_reduced", lv, params); };
  suite.measure("jlm.lu_autonomous.multiplier_pde", "M = (tau - q^2)^(-1/2)", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      return multiplier_pde_residual(red(p.lv), lu::reduced_bundle(p.lv, params).M, p.s);
    });
  });
  suite.measure("jlm.lu_autonomous.hamiltonian_consistency", "Eq. (Lu2aut) Hamiltonian", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      return hamiltonian_consistency(red(p.lv), lu::reduced_bundle(p.lv, params).M,
                                     lu::autonomous_reduced_hamiltonian(p.lv, params), p.s)
          .max_abs();
    });
  });
  suite.measure("jlm.lu_autonomous.H_conserved", "Eq. (Lu2aut) Hamiltonian is conserved", 1e-10, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      return lie_derivative(red(p.lv).as_vector_field(), lu::autonomous_reduced_hamiltonian(p.lv, params), p.s);
    });
  });
  const SystemModel target = instantiate(find_system("lu_autonomous"), params);
  Params src = params;
  check_transform(suite, "lu_time", src, std::min<std::size_t>(cfg.samples, 100), cfg.seed + 52, 0.0, 1.0,
                  [&](const State& s) { return target.field(s); }, 1e-7, Kind::printed,
                  "lu_transformed in t pushed to the rescaled time");
}

void qi_original_suite(Suite& suite, const Params& params, const VerifyConfig& cfg) {
  Params bad = params;
  bad["delta"] = params.at("delta") + 1.0;
  double enforced = 1.0;
  try {
    instantiate(find_system("qi_original"), bad);
  } catch (const ConstraintError&) {
    enforced = 0.0;
  }
  suite.upper("constraint.enforced", "Eq. (paraQi)", enforced, 0.0, Kind::identity,
              "violating parameters must be rejected");
  check_transform(suite, "qi_trans", params, std::min<std::size_t>(cfg.samples, 100), cfg.seed + 61, 0.0, 1.0,
                  [&](const State& s) { return instantiate(find_system("qi_transformed"), params).field(s); },
                  1e-7, Kind::printed);
}

void qi_transformed_suite(Suite& suite, const Params& params, const VerifyConfig& cfg) {
  const auto ps = planar_samples(cfg.samples, cfg.seed + 71, true, 0.0, 1.0);
  check_reduction_matches_displayed(suite, "qi_reduced", params, ps);
  auto red = [&](const LevelValues& lv) { return reduce("qi_reduced", lv, params); };
  suite.measure("jlm.qi.multiplier_pde", "Eq. (hyperQiJLM)", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      return multiplier_pde_residual(red(p.lv), qi::reduced_bundle(p.lv, params).M, p.s);
    });
  });
  suite.measure("jlm.qi.aux_condition", "Eq. (QiAux1)", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      const auto b = qi::reduced_bundle(p.lv, params);
      return aux_condition_residual(red(p.lv), b.M, *b.psi, *b.phi, p.s);
    });
  });
  suite.measure("jlm.qi.timedep_hamiltonian", "Eq. (H2DQi1)", 1e-8, Kind::printed, [&] {
    return max_planar(ps, [&](const PlanarSample& p) {
      const auto b = qi::reduced_bundle(p.lv, params);
      return timedep_hamiltonian_consistency(red(p.lv), b.M, *b.psi, *b.phi, b.H, p.s).max_abs();
    });
  });
  suite.measure("jlm.qi.canonical_jacobian", "Q = exp((eps - lam) t) r, P = arcsin(q / sqrt(tau)) - beta t",
                1e-10, Kind::printed, [&] {
                  return max_planar(ps, [&](const PlanarSample& p) {
                    const auto b = qi::reduced_bundle(p.lv, params);
                    return canonical_jacobian_check(b.M, *b.Q, *b.P, p.s);
                  });
                });
  suite.measure("jlm.qi.dHdt_equals_partial_rq", "dH/dt = dH/dt (explicit), (r, q) chart", 1e-8,
                Kind::printed, [&] {
                  return max_planar(ps, [&](const PlanarSample& p) {
                    return total_minus_partial_time_derivative(red(p.lv), qi::reduced_bundle(p.lv, params).H, p.s);
                  });
                });

  const double beta = params.at("beta");
  const auto cs = planar_samples(cfg.samples, cfg.seed + 72, false, 0.0, 1.0, [beta](const PlanarSample& p) {
    return std::abs(p.s.coords[1] + beta * p.s.t) < 1.4;
  });
  suite.measure("canonical.qi.hamilton_minus_convention", "Eq. (Qi2DCan) with Eq. (HamQi2DCan)", 1e-8,
                Kind::printed, [&] {
                  return max_planar(cs, [&](const PlanarSample& p) {
                    return hamilton_equations_residual(qi::canonical_displayed(p.lv, params),
                                                       qi::canonical_hamiltonian(p.lv, params), p.s)
                        .max_abs();
                  });
                });
  suite.measure("canonical.qi.dHdt_equals_partial", "dH/dt = dH/dt (explicit), (Q, P) chart", 1e-8,
                Kind::printed, [&] {
                  return max_planar(cs, [&](const PlanarSample& p) {
                    return total_minus_partial_time_derivative(qi::canonical_displayed(p.lv, params),
                                                               qi::canonical_hamiltonian(p.lv, params), p.s);
                  });
                });
  compare_planar(suite, "canonical.qi.pushforward_vs_printed", "Eq. (Qi2DCan)", cs,
                 [&](const LevelValues& lv) { return qi::canonical_pushforward(lv, params); },
                 [&](const LevelValues& lv) { return qi::canonical_displayed(lv, params); }, 1e-7);
}

void qi_special_suite(Suite& suite, const SystemModel& m, const std::vector<State>& ss, const Params& params,
                      const VerifyConfig& cfg) {
  const ScalarField& H3 = m.candidate_integrals.at(0).field;
  Claim& law = suite.measure("candidate.H3.drift_law", "measured dH3/dt against -r^2", 1e-10, Kind::identity, [&] {
    return max_over(ss, [&](const State& s) {
      const double r = s.coords[3];
      return lie_derivative(m.field, H3, s) + r * r;
    });
  });
  const Claim* cons = nullptr;
  // The conservation claim is recorded by the generic integral checks.
  (void)cons;
  law.details["holds"] = law.status == ClaimStatus::pass ? "dH3/dt = -r^2 (H3 not conserved)"
                                                         : "neither hypothesis within tolerance";

  // Rescaled time reduction: derived from the flow vs printed, at the given
  // parameters and at a probe with epsilon - lambda != 1.
  auto rescaled = [&](const Params& p, std::uint64_t seed) {
    const auto ts = planar_samples(std::min<std::size_t>(cfg.samples, 100), seed, true, 0.5, 2.0);
    double w = 0.0;
    for (const auto& s : ts) {
      const auto a = qi::rescaled_time_derived(s.lv, p), b = qi::rescaled_time_displayed(s.lv, p);
      w = std::max(w, std::max(std::abs(a.f.value(s.s) - b.f.value(s.s)) / (1.0 + std::abs(a.f.value(s.s))),
                               std::abs(a.g.value(s.s) - b.g.value(s.s)) / (1.0 + std::abs(a.g.value(s.s)))));
    }
    return w;
  };
  Params probe = params;
  probe["epsilon"] = params.at("epsilon") + 1.0;
  probe["delta"] = probe["epsilon"];
  const double at_params = rescaled(params, cfg.seed + 81);
  const double at_probe = rescaled(probe, cfg.seed + 82);
  Claim& c = suite.upper("reduction.qi_rescaled_time.derived_vs_printed", "Sec. 3.4 rescaled-time system",
                         std::max(at_params, at_probe), 1e-10, Kind::printed,
                         "checked at the given parameters and at epsilon + 1");
  c.details["residual_at_params"] = at_params;
  c.details["residual_at_probe"] = at_probe;
  c.details["probe_epsilon"] = probe["epsilon"];

  check_transform(suite, "qi_time", params, std::min<std::size_t>(cfg.samples, 100), cfg.seed + 83, 0.0, 1.0,
                  {}, 0.0, Kind::identity);
}

}  // namespace

VerificationReport verify_system(const std::string& system, const VerifyConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (!(cfg.tol_scale > 0.0)) throw std::invalid_argument("tolerance scale must be positive");
  const SystemDescriptor& d = find_system(system);
  const Params params = merged(d, cfg.params);
  check_constraints(d, params);
  const SystemModel m = d.build(params);

  VerificationReport report;
  report.system = d.name;
  report.anchor = d.anchor;
  report.params = params;
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  Suite suite(report.claims, cfg.tol_scale);

  const auto ss = draw(d, m, cfg.samples, cfg.seed);
  check_field_jacobian(suite, m, ss);
  check_integrals(suite, m, ss);
  check_structures(suite, m, ss, cfg.seed);

  if (system == "lorenz_rho0" || system == "lorenz_conservative") lorenz_suite(suite, system, m, ss, cfg);
  else if (system == "shivamoggi") shivamoggi_suite(suite, m, ss);
  else if (system == "raychaudhuri") raychaudhuri_suite(suite, m, ss, cfg);
  else if (system == "lu_original") lu_original_suite(suite, params, cfg);
  else if (system == "lu_transformed") lu_transformed_suite(suite, params, cfg);
  else if (system == "lu_autonomous") lu_autonomous_suite(suite, params, cfg);
  else if (system == "qi_original") qi_original_suite(suite, params, cfg);
  else if (system == "qi_transformed") qi_transformed_suite(suite, params, cfg);
  else if (system == "qi_special") qi_special_suite(suite, m, ss, params, cfg);

  std::sort(report.claims.begin(), report.claims.end(),
            [](const Claim& a, const Claim& b) { return a.id < b.id; });
  return report;
}

nlohmann::json to_json(const VerificationReport& r, bool deterministic) {
  nlohmann::json j;
  j["system"] = r.system;
  j["anchor"] = r.anchor;
  j["params"] = r.params;
  j["claims"] = nlohmann::json::array();
  for (const auto& c : r.claims) {
    nlohmann::json cj;
    cj["id"] = c.id;
    cj["anchor"] = c.anchor;
    cj["residual"] = std::isfinite(c.residual) ? nlohmann::json(c.residual) : nlohmann::json(nullptr);
    cj["tolerance"] = c.tolerance;
    cj["status"] = status_name(c.status);
    if (!c.note.empty()) cj["note"] = c.note;
    if (!c.details.is_null()) cj["details"] = c.details;
    j["claims"].push_back(cj);
  }
  j["summary"] = {{"pass", r.count(ClaimStatus::pass)},
                  {"fail", r.count(ClaimStatus::fail)},
                  {"mismatch_reported", r.count(ClaimStatus::mismatch_reported)}};
  j["environment"] = {{"seed", r.seed}, {"samples", r.samples}, {"version", kVersion}};
  if (!deterministic) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["environment"]["timestamp"] = buf;
  }
  return j;
}

nlohmann::json merge_reports(const std::vector<nlohmann::json>& reports) {
  if (reports.empty()) throw std::invalid_argument("merge_reports: no input reports");
  nlohmann::json out;
  out["claims"] = nlohmann::json::array();
  out["sources"] = nlohmann::json::array();
  std::string version;
  bool conflict = false;
  for (const auto& r : reports) {
    const std::string sys = r.value("system", "");
    for (auto c : r.value("claims", nlohmann::json::array())) {
      c["system"] = sys;
      out["claims"].push_back(c);
    }
    const nlohmann::json env = r.value("environment", nlohmann::json::object());
    out["sources"].push_back({{"system", sys}, {"environment", env}});
    const std::string v = env.value("version", "");
    if (version.empty()) version = v;
    else if (v != version) conflict = true;
  }
  out["version"] = version;
  if (conflict) out["warning"] = "reports were produced by different versions";
  return out;
}

}  // namespace quadham
