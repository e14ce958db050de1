#ifndef NLD_QUANTUM_SCAN_HPP
#define NLD_QUANTUM_SCAN_HPP

// N-JL equations with generic energy E and angular momentum l, after the
// polar derivatives are substituted, evaluated on the trial profile
// X_E = (2Er - 1/(2Er)) / 2. They all vanish only for E = m, l = 1/2.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace nld {

/// Individual equations at one (r, theta). Signed values.
struct GenericElEquations {
  double first = 0.0;      // appears twice in the expanded system
  double third = 0.0;
  double fourth = 0.0;
  double separation = 0.0; // (2l - 1)(X^2 + 1): the theta-independent part of the fourth
  // the overdetermined system left after l = 1/2
  double reduced_first = 0.0;
  double reduced_second = 0.0;
  double reduced_third = 0.0;

  double max_generic() const { return std::max({std::abs(first), std::abs(third), std::abs(fourth)}); }
  double max_reduced() const {
    return std::max({std::abs(reduced_first), std::abs(reduced_second), std::abs(reduced_third)});
  }
};

inline double X_trial(double r, double E) {
  double const x = 2.0 * E * r;
  return 0.5 * (x - 1.0 / x);
}

inline double dX_trial(double r, double E) { return E + 1.0 / (4.0 * E * r * r); }

inline GenericElEquations generic_el_equations(double r, double theta, double E, double l, double m,
                                               double X, double r_dX) {
  double const w = std::sqrt(X * X + 1.0);
  double const c2 = std::cos(theta) * std::cos(theta);
  double const s2 = std::sin(theta) * std::sin(theta);
  GenericElEquations e;
  e.first = r_dX / w + 1.0 - 2.0 * E * r * w + 2.0 * l - 2.0 + 2.0 * m * r * X;
  e.third = X * (-r_dX + X + w - 2.0 * E * r + 2.0 * l * w) + (1.0 - 2.0 * m * r * w + 2.0 * E * r * X) * c2;
  e.fourth = (-2.0 * m * r * X - r_dX / w + 2.0 * E * r * w) * s2 - (2.0 * l - 1.0) * (X * X + 1.0);
  e.separation = (2.0 * l - 1.0) * (X * X + 1.0);
  e.reduced_first = r_dX / w - 2.0 * E * r * w + 2.0 * m * r * X;
  e.reduced_second = r_dX - X + 2.0 * E * r - 2.0 * w;
  e.reduced_third = 1.0 - 2.0 * m * r * w + 2.0 * E * r * X;
  return e;
}

/// Equations on the trial profile X_E.
inline GenericElEquations generic_el_equations(double r, double theta, double E, double l, double m) {
  return generic_el_equations(r, theta, E, l, m, X_trial(r, E), r * dX_trial(r, E));
}

struct ScanCell {
  double E = 0.0;
  double l = 0.0;
  double residual = 0.0;   // max |generic equation| over the probe points
  double separation = 0.0; // max |(2l-1)(X^2+1)|
  double reduced = 0.0;    // max |reduced equation|
};

struct ScanSurface {
  int n_E = 0;
  int n_l = 0;
  std::vector<ScanCell> cells; // E-major

  ScanCell const& operator()(int i, int j) const { return cells.at(static_cast<std::size_t>(i * n_l + j)); }

  std::vector<ScanCell> zero_cells(double tol) const {
    std::vector<ScanCell> out;
    for (auto const& c : cells)
      if (c.residual <= tol) out.push_back(c);
    return out;
  }
};

struct ScanGrid {
  double E_min = 0.5; // in units of m
  double E_max = 1.5;
  int n_E = 11;
  double l_min = 0.0;
  double l_max = 1.0;
  int n_l = 11;
  /// Probe radii in units of 1/m and probe angles.
  std::vector<double> radii{0.3, 0.7, 1.3, 2.0, 5.0};
  std::vector<double> thetas{pi / 6, pi / 3, 2 * pi / 5};
};

inline double scan_node(double lo, double hi, int n, int i) {
  return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

inline ScanSurface quantum_number_scan(double m, ScanGrid const& grid = {}) {
  if (!(m > 0.0)) throw std::invalid_argument("quantum_number_scan: mass must be positive");
  if (grid.n_E < 1 || grid.n_l < 1) throw std::invalid_argument("quantum_number_scan: empty grid");
  ScanSurface out;
  out.n_E = grid.n_E;
  out.n_l = grid.n_l;
  for (int i = 0; i < grid.n_E; ++i)
    for (int j = 0; j < grid.n_l; ++j) {
      ScanCell cell;
      cell.E = scan_node(grid.E_min, grid.E_max, grid.n_E, i);
      cell.l = scan_node(grid.l_min, grid.l_max, grid.n_l, j);
      for (double rr : grid.radii)
        for (double th : grid.thetas) {
          GenericElEquations const e = generic_el_equations(rr / m, th, cell.E * m, cell.l, m);
          cell.residual = std::max(cell.residual, e.max_generic());
          cell.separation = std::max(cell.separation, std::abs(e.separation));
          cell.reduced = std::max(cell.reduced, e.max_reduced());
        }
      out.cells.push_back(cell);
    }
  return out;
}

} // namespace nld

#endif // NLD_QUANTUM_SCAN_HPP
