#ifndef NLD_FINITE_DIFFERENCE_HPP
#define NLD_FINITE_DIFFERENCE_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

#include <Eigen/Core>

#include "errors.hpp"
#include "tensor.hpp"

namespace nld {

/// Steps for central differences on the (r, theta) plane. The radial step is
/// relative (h_r = r_rel * r) so that the truncation error is the same at
/// every decade of r; the angular step is absolute.
struct FdSteps {
  double r_rel = 1e-5;
  double theta = 1e-5;
  /// Threshold on |D(h/2) - D(h)| / 3 relative to 1 + |D|.
  double convergence_tol = 1e-4;
};

namespace detail {

inline double fd_norm(double v) { return std::abs(v); }

template <class Derived>
double fd_norm(Eigen::MatrixBase<Derived> const& v) {
  return v.cwiseAbs().maxCoeff();
}

template <int Rank>
double fd_norm(Tensor<Rank> const& v) {
  return v.max_abs();
}

} // namespace detail

/// Central difference of f at x with one Richardson halving:
/// returns (4 D(h/2) - D(h)) / 3 and throws StepTooLarge when the two
/// estimates disagree beyond the convergence threshold.
template <class F>
auto richardson_derivative(F&& f, double x, double h, double convergence_tol = 1e-4) {
  using Value = std::decay_t<decltype(f(x))>;
  Value const d_h = (f(x + h) - f(x - h)) * (1.0 / (2.0 * h));
  Value const d_h2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) * (1.0 / h);
  Value const diff = d_h2 - d_h;
  double const err = detail::fd_norm(diff) / 3.0;
  double const scale = 1.0 + detail::fd_norm(d_h2);
  if (!(err <= convergence_tol * scale)) {
    std::ostringstream msg;
    msg << "finite difference not converged at x = " << x << " (h = " << h << ", Richardson error " << err
        << ")";
    throw StepTooLarge(msg.str());
  }
  return Value(d_h2 + diff * (1.0 / 3.0));
}

} // namespace nld

#endif // NLD_FINITE_DIFFERENCE_HPP
