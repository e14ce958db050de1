#ifndef NLD_SOLER_ODE_HPP
#define NLD_SOLER_ODE_HPP

// Radial system of the Soler model with the exact-branch tracking tools.
//
//   r X' / sqrt(X^2+1) = 2mr sqrt(X^2+1) - 2mrX - 2 + r X^2 G
//   2 + r G' / G       = 2mr sqrt(X^2+1) - r G X sqrt(X^2+1) - 2mrX

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ode.hpp"
#include "polar.hpp"
#include "types.hpp"

namespace nld {

inline constexpr double kOdeOverflowGuard = 1e12;

struct OdeState {
  double r = 1.0;
  double X = 0.0;
  double G = 0.0;
};

struct SolerDerivative {
  double dX = 0.0;
  double dG = 0.0;
};

inline SolerDerivative soler_rhs(OdeState const& s, ModelSpec const& spec) {
  if (!(s.r > 0.0)) throw std::invalid_argument("soler_rhs: r must be positive");
  if (!(std::abs(s.X) <= kOdeOverflowGuard) || !(std::abs(s.G) <= kOdeOverflowGuard))
    throw DivergingState("soler_rhs: |X| or |G| beyond 1e12", s.r);
  double const m = spec.m;
  double const r = s.r;
  double const w = std::sqrt(s.X * s.X + 1.0);
  double const dX = (w / r) * (2.0 * m * r * w - 2.0 * m * r * s.X - 2.0 + r * s.X * s.X * s.G);
  double const dG = (s.G / r) * (2.0 * m * r * w - r * s.G * s.X * w - 2.0 * m * r * s.X - 2.0);
  return {dX, dG};
}

/// The exact pair (X, G) at r, which lies on the two branches r < 1/(2m)
/// and r > 1/(2m).
inline OdeState exact_state(double r, ModelSpec const& spec) { return {r, X_exact(r, spec), G_exact(r, spec)}; }

/// Adaptive solution of the radial system with dense output. It is also a
/// RadialProfile, so an integrated (X, G) can be fed to the residual suites.
class SolerTrajectory {
public:
  using State = Eigen::Vector2d;

  ModelSpec spec{};
  std::vector<double> r;
  std::vector<double> X;
  std::vector<double> G;
  std::vector<DenseStep<2>> steps;
  OdeStatistics stats{};
  /// Set when a step fell below 1e-10 r.
  bool stiffness_warning = false;

  double r_begin() const { return r.front(); }
  double r_end() const { return r.back(); }

  /// Dense-output state at any radius covered by the trajectory.
  OdeState state_at(double x) const {
    double const lo = std::min(r_begin(), r_end());
    double const hi = std::max(r_begin(), r_end());
    if (x < lo || x > hi) throw std::out_of_range("SolerTrajectory: radius outside the integrated span");
    bool const forward = r_end() > r_begin();
    auto it = std::lower_bound(r.begin(), r.end(), x, [forward](double a, double b) { return forward ? a < b : a > b; });
    std::size_t idx = static_cast<std::size_t>(it - r.begin());
    if (idx == 0) return {x, X.front(), G.front()};
    State const y = steps[idx - 1].at(x);
    return {x, y[0], y[1]};
  }

  RadialSample at(double x) const {
    OdeState const s = state_at(x);
    SolerDerivative const d = soler_rhs(s, spec);
    return {s.X, d.dX, s.G, d.dG};
  }
};

namespace detail {

inline void check_split_rule(double r0, double r1, ModelSpec const& spec) {
  double const rs = 1.0 / (2.0 * spec.m);
  if (std::min(r0, r1) <= rs && rs <= std::max(r0, r1)) {
    std::ostringstream msg;
    msg << "split rule: the span [" << std::min(r0, r1) << ", " << std::max(r0, r1)
        << "] contains the singular radius 1/(2m) = " << rs
        << "; integrate r < 1/(2m) and r > 1/(2m) as separate segments";
    throw SpanCrossesSingularRadius(msg.str());
  }
}

} // namespace detail

/// Integrate from initial.r to r_end. Spans may run in either direction but
/// may not contain 1/(2m).
inline SolerTrajectory integrate(IntegratorConfig const& cfg, OdeState const& initial, ModelSpec const& spec,
                                 double r_end) {
  cfg.validate();
  spec.validate();
  if (!(initial.r > 0.0) || !(r_end > 0.0)) throw std::invalid_argument("integrate: radii must be positive");
  if (r_end == initial.r) throw std::invalid_argument("integrate: empty span");
  detail::check_split_rule(initial.r, r_end, spec);

  using State = Eigen::Vector2d;
  SolerTrajectory traj;
  traj.spec = spec;
  auto f = [&](double x, State const& y) {
    ++traj.stats.evaluations;
    SolerDerivative const d = soler_rhs({x, y[0], y[1]}, spec);
    return State(d.dX, d.dG);
  };

  double const dir = r_end > initial.r ? 1.0 : -1.0;
  double const span = std::abs(r_end - initial.r);
  double x = initial.r;
  State y(initial.X, initial.G);
  State k1 = f(x, y);
  traj.r.push_back(x);
  traj.X.push_back(y[0]);
  traj.G.push_back(y[1]);

  bool const fixed = cfg.fixed_step > 0.0;
  double h = fixed ? span / std::ceil(span / cfg.fixed_step) : (cfg.h0 > 0.0 ? cfg.h0 : 1e-3 * span);
  double const eps = std::numeric_limits<double>::epsilon();

  while (dir * (r_end - x) > 0.0) {
    if (traj.stats.accepted + traj.stats.rejected >= cfg.max_steps)
      throw StepUnderflow("integrate: step budget exhausted", x);
    bool last = false;
    if (h >= std::abs(r_end - x) * (1.0 - 1e-12)) {
      h = std::abs(r_end - x);
      last = true;
    }
    if (h < 16.0 * eps * x) throw StepUnderflow("integrate: step size underflow", x);
    if (h < 1e-10 * x) traj.stiffness_warning = true;

    TrialStep<2> trial;
    try {
      trial = dopri_step<2>(f, x, y, k1, dir * h, cfg);
    } catch (DivergingState const&) {
      if (fixed) throw DivergingState("integrate: state diverged", x);
      ++traj.stats.rejected;
      h *= 0.25;
      continue;
    }
    if (!fixed && !(trial.error <= 1.0)) {
      ++traj.stats.rejected;
      h *= std::isfinite(trial.error) ? std::max(0.2, 0.9 * std::pow(trial.error, -0.2)) : 0.25;
      continue;
    }

    ++traj.stats.accepted;
    traj.stats.min_step = std::min(traj.stats.min_step, h);
    traj.stats.max_step = std::max(traj.stats.max_step, h);
    x = last ? r_end : x + dir * h;
    y = trial.y1;
    k1 = trial.k7;
    if (!(std::abs(y[0]) <= kOdeOverflowGuard) || !(std::abs(y[1]) <= kOdeOverflowGuard))
      throw DivergingState("integrate: |X| or |G| beyond 1e12", traj.r.back());
    traj.steps.push_back(trial.dense);
    traj.r.push_back(x);
    traj.X.push_back(y[0]);
    traj.G.push_back(y[1]);
    if (!fixed) h *= step_factor(trial.error);
  }
  return traj;
}

/// Largest relative deviations of a trajectory from the exact pair, over the
/// accepted nodes and the dense output at each step midpoint.
struct TrackingReport {
  double max_dev_X = 0.0;
  double max_dev_G = 0.0;
  double max_abs_departure_X = 0.0;

  double max_deviation() const { return std::max(max_dev_X, max_dev_G); }
};

inline TrackingReport tracking_report(SolerTrajectory const& traj) {
  TrackingReport out;
  auto visit = [&](double x, double X, double G) {
    double const Xe = X_exact(x, traj.spec);
    double const Ge = G_exact(x, traj.spec);
    out.max_dev_X = std::max(out.max_dev_X, std::abs(X - Xe) / std::abs(Xe));
    out.max_dev_G = std::max(out.max_dev_G, std::abs(G - Ge) / std::abs(Ge));
    out.max_abs_departure_X = std::max(out.max_abs_departure_X, std::abs(X - Xe));
  };
  for (std::size_t i = 0; i < traj.r.size(); ++i) visit(traj.r[i], traj.X[i], traj.G[i]);
  for (auto const& st : traj.steps) {
    double const mid = st.x0 + 0.5 * st.h;
    auto const y = st.at(mid);
    visit(mid, y[0], y[1]);
  }
  return out;
}

/// |X - X_exact| at every node, for perturbed starts.
inline std::vector<double> departure_profile(SolerTrajectory const& traj) {
  std::vector<double> out;
  out.reserve(traj.r.size());
  for (std::size_t i = 0; i < traj.r.size(); ++i) out.push_back(std::abs(traj.X[i] - X_exact(traj.r[i], traj.spec)));
  return out;
}

/// CSV columns r, X, G, X_exact, G_exact, dev_X, dev_G (relative deviations).
inline void write_trajectory_csv(std::ostream& os, SolerTrajectory const& traj) {
  os << "r,X,G,X_exact,G_exact,dev_X,dev_G\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < traj.r.size(); ++i) {
    double const x = traj.r[i];
    double const Xe = X_exact(x, traj.spec);
    double const Ge = G_exact(x, traj.spec);
    os << x << ',' << traj.X[i] << ',' << traj.G[i] << ',' << Xe << ',' << Ge << ','
       << std::abs(traj.X[i] - Xe) / std::abs(Xe) << ',' << std::abs(traj.G[i] - Ge) / std::abs(Ge) << '\n';
  }
}

} // namespace nld

#endif // NLD_SOLER_ODE_HPP
