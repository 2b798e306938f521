#include "quadham/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

namespace quadham {

const char* method_name(Method m) {
  switch (m) {
    case Method::rk4: return "rk4";
    case Method::dp45: return "dp45";
    case Method::euler: return "euler";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "rk4") return Method::rk4;
  if (name == "dp45" || name == "rk45") return Method::dp45;
  if (name == "euler") return Method::euler;
  throw std::invalid_argument("unknown integration method '" + name + "'");
}

namespace {

bool finite(const Vec& v) { return v.allFinite(); }

Vec rk4_step(const VectorField& X, const Vec& y, double t, double h) {
  const Vec k1 = X(State(y, t));
  const Vec k2 = X(State(y + 0.5 * h * k1, t + 0.5 * h));
  const Vec k3 = X(State(y + 0.5 * h * k2, t + 0.5 * h));
  const Vec k4 = X(State(y + h * k3, t + h));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4) tableau.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

struct Dp45Result {
  Vec y;
  Vec err;
};

Dp45Result dp45_step(const VectorField& X, const Vec& y, double t, double h) {
  using namespace dp;
  const Vec k1 = X(State(y, t));
  const Vec k2 = X(State(y + h * a21 * k1, t + c2 * h));
  const Vec k3 = X(State(y + h * (a31 * k1 + a32 * k2), t + c3 * h));
  const Vec k4 = X(State(y + h * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * h));
  const Vec k5 = X(State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * h));
  const Vec k6 =
      X(State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + h));
  const Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Vec k7 = X(State(y5, t + h));
  const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {y5, err};
}

class Recorder {
 public:
  Recorder(Trajectory& traj, const std::vector<ScalarField>& integrals, std::size_t every)
      : traj_(traj), integrals_(integrals), every_(std::max<std::size_t>(1, every)) {
    traj_.integral_series.assign(integrals.size(), {});
    for (const auto& f : integrals) traj_.integral_names.push_back(f.name);
  }

  void push(const State& s) {
    traj_.samples.push_back(s);
    for (std::size_t k = 0; k < integrals_.size(); ++k) {
      const auto& f = integrals_[k];
      traj_.integral_series[k].push_back(f.contains(s) ? f.value(s)
                                                       : std::numeric_limits<double>::quiet_NaN());
    }
  }

  void step(const State& s, bool last) {
    ++count_;
    if (last || count_ % every_ == 0) push(s);
  }

 private:
  Trajectory& traj_;
  const std::vector<ScalarField>& integrals_;
  std::size_t every_;
  std::size_t count_ = 0;
};

}  // namespace

Trajectory integrate(const VectorField& X, const State& s0, const IntegratorConfig& cfg,
                     const std::vector<ScalarField>& integrals) {
  if (s0.dim() != X.dim) throw DimensionError("integrate: state dimension does not match field");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (cfg.method == Method::dp45 && !(cfg.rtol > 0.0 && cfg.atol > 0.0))
    throw std::invalid_argument("integrate: rtol and atol must be positive");
  if (!X.contains(s0)) throw DomainError("integrate: initial state outside the field's domain");

  Trajectory traj;
  Recorder rec(traj, integrals, cfg.record_every);
  rec.push(s0);
  const double t0 = s0.t, t1 = cfg.t_end;
  if (!(t1 > t0)) {
    traj.drift.assign(integrals.size(), 0.0);
    return traj;
  }

  Vec y = s0.coords;
  double t = t0;
  auto abort_with = [&](std::string why) {
    traj.aborted = true;
    traj.abort_reason = std::move(why);
  };

  if (cfg.method != Method::dp45) {
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / cfg.dt - 1e-9));
    const double h = (t1 - t0) / static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
      if (traj.steps >= cfg.max_steps) {
        abort_with("step budget exhausted");
        break;
      }
      const Vec next = cfg.method == Method::rk4 ? rk4_step(X, y, t, h)
                                                 : Vec(y + h * X(State(y, t)));
      const double tn = (i == n) ? t1 : t0 + static_cast<double>(i) * h;
      ++traj.steps;
      if (!finite(next)) {
        abort_with("non-finite state");
        break;
      }
      y = next;
      t = tn;
      rec.step(State(y, t), i == n);
      if (!X.contains(State(y, t))) {
        abort_with("state left the field's domain");
        break;
      }
    }
  } else {
    double h = std::min(cfg.dt, t1 - t0);
    double err_prev = 1.0;
    while (t < t1) {
      if (traj.steps >= cfg.max_steps) {
        abort_with("step budget exhausted");
        break;
      }
      if (h < 1e-14 * (1.0 + std::abs(t))) {
        abort_with("step size underflow");
        break;
      }
      const bool last = t + h >= t1;
      if (last) h = t1 - t;
      const auto [next, e] = dp45_step(X, y, t, h);
      double err = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(next[i]));
        err += (e[i] / sc) * (e[i] / sc);
      }
      err = std::sqrt(err / static_cast<double>(y.size()));
      if (!std::isfinite(err) || !finite(next)) {
        ++traj.rejected;
        h *= 0.2;
        continue;
      }
      if (err <= 1.0) {
        ++traj.steps;
        y = next;
        t = last ? t1 : t + h;
        rec.step(State(y, t), last);
        // PI controller
        const double e_now = std::max(err, 1e-10);
        double factor = 0.9 * std::pow(e_now, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
        factor = std::clamp(factor, 0.2, 5.0);
        err_prev = e_now;
        h *= factor;
        if (!X.contains(State(y, t))) {
          abort_with("state left the field's domain");
          break;
        }
      } else {
        ++traj.rejected;
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      }
    }
  }
  for (const auto& d : drift_report(traj, integrals)) traj.drift.push_back(d.drift);
  return traj;
}

std::vector<DriftEntry> drift_report(const Trajectory& traj,
                                     const std::vector<ScalarField>& integrals) {
  std::vector<DriftEntry> out;
  for (const auto& f : integrals) {
    DriftEntry d;
    d.name = f.name;
    if (traj.samples.empty() || !f.contains(traj.samples.front())) {
      d.domain_exit = true;
      out.push_back(d);
      continue;
    }
    const double i0 = f.value(traj.samples.front());
    for (const auto& s : traj.samples) {
      if (!f.contains(s)) {
        d.domain_exit = true;
        break;
      }
      d.drift = std::max(d.drift, std::abs(f.value(s) - i0) / (1.0 + std::abs(i0)));
      ++d.samples_used;
    }
    out.push_back(d);
  }
  return out;
}

Mat jacobian_fd(const VectorField& X, const State& s, double h) {
  const int n = s.dim();
  Mat j(n, n);
  for (int a = 0; a < n; ++a) {
    const double step = h * (1.0 + std::abs(s.coords[a]));
    State p = s, m = s;
    p.coords[a] += step;
    m.coords[a] -= step;
    j.col(a) = (X(p) - X(m)) / (2.0 * step);
  }
  return j;
}

LyapunovResult lyapunov_spectrum(const VectorField& X, const State& s0, const LyapunovConfig& cfg) {
  if (!(cfg.T > 0.0 && cfg.dt > 0.0 && cfg.renorm > 0.0))
    throw std::invalid_argument("lyapunov_spectrum: T, dt and renorm must be positive");
  const int n = s0.dim();
  if (n != X.dim) throw DimensionError("lyapunov_spectrum: state dimension does not match field");

  auto jac = [&](const Vec& y, double t) {
    const State s(y, t);
    return X.jacobian ? X.jacobian(s) : jacobian_fd(X, s, cfg.fd_step);
  };

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat frame(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) frame(i, j) = normal(rng);
  frame = Eigen::HouseholderQR<Mat>(frame).householderQ() * Mat::Identity(n, n);

  const auto steps_per_renorm =
      std::max<long>(1, std::lround(cfg.renorm / cfg.dt));
  const double h = cfg.renorm / static_cast<double>(steps_per_renorm);
  const auto intervals = std::max<long>(1, std::lround(cfg.T / cfg.renorm));

  Vec y = s0.coords;
  double t = s0.t;
  Vec sums = Vec::Zero(n);
  std::vector<Vec> local;
  local.reserve(static_cast<std::size_t>(intervals));
  double div_sum = 0.0;

  for (long k = 0; k < intervals; ++k) {
    for (long i = 0; i < steps_per_renorm; ++i) {
      // RK4 on (y, frame) jointly.
      const Mat J1 = jac(y, t);
      const Vec k1 = X(State(y, t));
      const Mat F1 = J1 * frame;
      const Vec y2 = y + 0.5 * h * k1;
      const Mat J2 = jac(y2, t + 0.5 * h);
      const Vec k2 = X(State(y2, t + 0.5 * h));
      const Mat F2 = J2 * (frame + 0.5 * h * F1);
      const Vec y3 = y + 0.5 * h * k2;
      const Mat J3 = jac(y3, t + 0.5 * h);
      const Vec k3 = X(State(y3, t + 0.5 * h));
      const Mat F3 = J3 * (frame + 0.5 * h * F2);
      const Vec y4 = y + h * k3;
      const Mat J4 = jac(y4, t + h);
      const Vec k4 = X(State(y4, t + h));
      const Mat F4 = J4 * (frame + h * F3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      frame += (h / 6.0) * (F1 + 2.0 * F2 + 2.0 * F3 + F4);
      t += h;
      div_sum += h * J1.trace();
      if (!y.allFinite()) throw std::runtime_error("lyapunov_spectrum: orbit became non-finite");
    }
    Eigen::HouseholderQR<Mat> qr(frame);
    const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    Mat Q = qr.householderQ() * Mat::Identity(n, n);
    Vec rate(n);
    for (int i = 0; i < n; ++i) {
      const double r = R(i, i);
      if (!std::isfinite(r) || std::abs(r) < 1e-300)
        throw std::runtime_error("lyapunov_spectrum: tangent frame collapsed");
      rate[i] = std::log(std::abs(r)) / cfg.renorm;
      if (r < 0.0) Q.col(i) = -Q.col(i);
    }
    frame = Q;
    sums += rate * cfg.renorm;
    local.push_back(rate);
  }

  const double total = static_cast<double>(intervals) * cfg.renorm;
  LyapunovResult res;
  res.T = total;
  res.renorm = cfg.renorm;
  res.seed = cfg.seed;
  res.mean_divergence = div_sum / total;

  // Standard errors over the second half of the interval rates.
  const std::size_t half = local.size() / 2;
  const std::size_t m = local.size() - half;
  std::vector<std::pair<double, double>> est(n);
  for (int i = 0; i < n; ++i) {
    double mean = 0.0;
    for (std::size_t k = half; k < local.size(); ++k) mean += local[k][i];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t k = half; k < local.size(); ++k) var += (local[k][i] - mean) * (local[k][i] - mean);
    const double se = m > 1 ? std::sqrt(var / static_cast<double>(m - 1) / static_cast<double>(m)) : 0.0;
    est[i] = {sums[i] / total, se};
  }
  std::sort(est.begin(), est.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [e, se] : est) {
    res.exponents.push_back(e);
    res.std_errors.push_back(se);
  }
  return res;
}

double convergence_order(const VectorField& X, const State& s0, double t_end, Method method,
                         double dt0, const std::optional<Vec>& exact, int levels) {
  if (method == Method::dp45) throw std::invalid_argument("convergence_order: fixed-step methods only");
  if (levels < 2) throw std::invalid_argument("convergence_order: at least two levels required");
  auto run = [&](double dt) {
    IntegratorConfig cfg;
    cfg.method = method;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.record_every = std::numeric_limits<std::size_t>::max();
    const Trajectory tr = integrate(X, s0, cfg);
    if (tr.aborted) throw std::runtime_error("convergence_order: integration aborted: " + tr.abort_reason);
    return tr.samples.back().coords;
  };
  const Vec ref = exact ? *exact : run(dt0 / std::pow(2.0, levels + 3));
  // Least-squares slope of log(error) against log(dt).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int l = 0; l < levels; ++l) {
    const double dt = dt0 / std::pow(2.0, l);
    const double err = (run(dt) - ref).norm();
    const double lx = std::log(dt), ly = std::log(std::max(err, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = levels;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& labels) {
  out << "t";
  for (const auto& l : labels) out << ',' << l;
  for (const auto& l : traj.integral_names) out << ',' << l;
  out << "\r\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    num(s.t);
    for (Eigen::Index k = 0; k < s.coords.size(); ++k) {
      out << ',';
      num(s.coords[k]);
    }
    for (const auto& series : traj.integral_series) {
      out << ',';
      num(series[i]);
    }
    out << "\r\n";
  }
}

}  // namespace quadham
