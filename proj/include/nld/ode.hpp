#ifndef NLD_ODE_HPP
#define NLD_ODE_HPP

// Dormand-Prince 5(4) with the standard continuous extension of order 4.
// Works in either direction of the independent variable.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nld {

struct IntegratorConfig {
  double rtol = 1e-9;
  double atol = 1e-12;
  /// Initial step; 0 picks one from the scale of the span.
  double h0 = 0.0;
  /// Fixed-step mode: when positive, every step has this size and no error
  /// control is applied (used to measure the convergence order).
  double fixed_step = 0.0;
  long max_steps = 1000000;

  void validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("IntegratorConfig: rtol and atol must be positive");
    if (fixed_step < 0.0) throw std::invalid_argument("IntegratorConfig: fixed_step must be non-negative");
  }
};

/// One accepted step and its interpolation coefficients.
template <int N>
struct DenseStep {
  using State = Eigen::Matrix<double, N, 1>;
  double x0 = 0.0;
  double h = 0.0;
  State c1, c2, c3, c4, c5;

  State at(double x) const {
    double const s = (x - x0) / h;
    double const s1 = 1.0 - s;
    return c1 + s * (c2 + s1 * (c3 + s * (c4 + s1 * c5)));
  }
};

struct OdeStatistics {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
};

namespace dopri {

inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
// error = 5th-order minus embedded 4th-order weights
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

} // namespace dopri

/// Outcome of a single trial step.
template <int N>
struct TrialStep {
  using State = Eigen::Matrix<double, N, 1>;
  State y1;
  State k7;
  double error = 0.0;
  DenseStep<N> dense;
};

/// One Dormand-Prince step of size h from (x, y) with k1 = f(x, y).
template <int N, class F>
TrialStep<N> dopri_step(F& f, double x, Eigen::Matrix<double, N, 1> const& y, Eigen::Matrix<double, N, 1> const& k1,
                        double h, IntegratorConfig const& cfg) {
  using namespace dopri;
  using State = Eigen::Matrix<double, N, 1>;
  State const k2 = f(x + c2 * h, State(y + h * a21 * k1));
  State const k3 = f(x + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
  State const k4 = f(x + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  State const k5 = f(x + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  State const k6 = f(x + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  TrialStep<N> out;
  out.y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
  out.k7 = f(x + h, out.y1);

  State const err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * out.k7);
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    double const sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(out.y1[i]));
    sum += (err[i] / sc) * (err[i] / sc);
  }
  out.error = std::sqrt(sum / N);

  State const diff = out.y1 - y;
  State const bspl = h * k1 - diff;
  out.dense.x0 = x;
  out.dense.h = h;
  out.dense.c1 = y;
  out.dense.c2 = diff;
  out.dense.c3 = bspl;
  out.dense.c4 = diff - h * out.k7 - bspl;
  out.dense.c5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * out.k7);
  return out;
}

/// Step-size controller factor for an error estimate (order 5 method).
inline double step_factor(double error) {
  if (error == 0.0) return 5.0;
  return std::clamp(0.9 * std::pow(error, -0.2), 0.2, 5.0);
}

} // namespace nld

#endif // NLD_ODE_HPP
