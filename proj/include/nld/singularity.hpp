#ifndef NLD_SINGULARITY_HPP
#define NLD_SINGULARITY_HPP

// Singular loci and large-r decay of the matter densities.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "polar.hpp"
#include "types.hpp"

namespace nld {

enum class LocusKind { None, Ring, Shell };

inline char const* to_string(LocusKind k) {
  switch (k) {
  case LocusKind::Ring:
    return "ring";
  case LocusKind::Shell:
    return "shell";
  default:
    return "none";
  }
}

struct SingularLocus {
  LocusKind kind = LocusKind::None;
  double radius = 0.0;
  /// Set for rings: cos(theta) = 0.
  std::optional<double> theta;
};

/// Analytic locus: sinh^2 zeta + p cos^2 theta = 0 with zeta = ln 2mr.
inline SingularLocus singular_locus(ModelSpec const& spec) {
  spec.validate();
  SingularLocus out;
  out.radius = 1.0 / (2.0 * spec.m);
  if (spec.p == 0.0) {
    out.kind = LocusKind::Shell;
  } else {
    out.kind = LocusKind::Ring;
    out.theta = pi / 2;
  }
  return out;
}

/// phi^2 of the p-family: the N-JL and Soler closed forms at the endpoints,
/// the general formula in between.
inline double module_for(GridPoint const& pt, ModelSpec const& spec) {
  if (spec.p == 1.0) return module_njl(pt, spec);
  if (spec.p == 0.0) return module_soler(pt, spec);
  return module_general_p(pt, spec);
}

/// Linear (r, theta) window for the numerical search.
struct LocusGrid {
  double r_min = 0.05;
  double r_max = 2.0;
  int n_r = 400;
  double theta_min = 1e-3;
  double theta_max = pi - 1e-3;
  int n_theta = 200;
  /// Excluded radial band (r_lo, r_hi); empty when r_lo >= r_hi.
  double exclude_lo = 0.0;
  double exclude_hi = 0.0;
};

struct LocusEstimate {
  LocusKind kind = LocusKind::None;
  double radius = 0.0;
  double theta = 0.0;
  /// Cell sizes of the last refinement level.
  double r_cell = 0.0;
  double theta_cell = 0.0;
  int levels = 0;
  double peak_phi2 = 0.0;
  bool divergent = false;
  /// Fraction of sampled angles on which the peak radius is a spike.
  double shell_fraction = 0.0;
};

namespace detail {

inline double linspace_node(double lo, double hi, int n, int i) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

struct Argmax {
  int i = 0;
  int j = 0;
  double value = -1.0;
  bool hit_singular = false;
};

/// Evaluations that throw SingularPoint count as +infinity.
inline double density_or_inf(GridPoint const& pt, ModelSpec const& spec) {
  try {
    return module_for(pt, spec);
  } catch (SingularPoint const&) {
    return std::numeric_limits<double>::infinity();
  }
}

inline Argmax scan_window(ModelSpec const& spec, double r0, double r1, int n_r, double t0, double t1, int n_t,
                          double ex_lo, double ex_hi) {
  Argmax best;
  for (int i = 0; i < n_r; ++i) {
    double const r = linspace_node(r0, r1, n_r, i);
    if (ex_lo < ex_hi && r > ex_lo && r < ex_hi) continue;
    for (int j = 0; j < n_t; ++j) {
      double const v = density_or_inf(GridPoint(r, linspace_node(t0, t1, n_t, j)), spec);
      if (v > best.value) {
        best = {i, j, v, std::isinf(v)};
        if (best.hit_singular) return best;
      }
    }
  }
  return best;
}

} // namespace detail

inline constexpr double kDivergenceFactor = 1e6;

/// Grid argmax of phi^2 refined by halving the window around the maximum
/// until the radial cell is below 1e-3/(2m) or six levels have been used.
/// Divergence is flagged when phi^2 exceeds 1e6 (8m), an evaluation lands
/// on the locus, or the peak grows by at least 1.5 per level on geometric
/// average (node alignment can stall a single level). A
/// maximum on the outer window edge is a bounded maximum (kind none).
inline LocusEstimate locate_numerically(ModelSpec const& spec, LocusGrid const& grid = {}) {
  spec.validate();
  if (grid.n_r < 4 || grid.n_theta < 4) throw GridTooCoarse("locate_numerically: need at least 4x4 nodes");
  if (!(grid.r_min > 0.0) || !(grid.r_max > grid.r_min) || !(grid.theta_min >= 0.0) ||
      !(grid.theta_max > grid.theta_min) || !(grid.theta_max <= pi))
    throw std::invalid_argument("locate_numerically: bad window");

  double const target_cell = 1e-3 / (2.0 * spec.m);
  double const threshold = kDivergenceFactor * 8.0 * spec.m;
  double r0 = grid.r_min, r1 = grid.r_max, t0 = grid.theta_min, t1 = grid.theta_max;

  LocusEstimate out;
  detail::Argmax am = detail::scan_window(spec, r0, r1, grid.n_r, t0, t1, grid.n_theta, grid.exclude_lo,
                                          grid.exclude_hi);
  auto node_r = [&](int i) { return detail::linspace_node(r0, r1, grid.n_r, i); };
  auto node_t = [&](int j) { return detail::linspace_node(t0, t1, grid.n_theta, j); };
  out.radius = node_r(am.i);
  out.theta = node_t(am.j);
  out.peak_phi2 = am.value;
  out.r_cell = (r1 - r0) / (grid.n_r - 1);
  out.theta_cell = (t1 - t0) / (grid.n_theta - 1);

  // a maximum pinned to the outer radial edge (or an excluded band edge) is a
  // bounded maximum of a smooth region
  bool const at_outer_edge = am.i == 0 || am.i == grid.n_r - 1;
  bool const at_band_edge = grid.exclude_lo < grid.exclude_hi &&
                            (std::abs(out.radius - grid.exclude_lo) <= out.r_cell ||
                             std::abs(out.radius - grid.exclude_hi) <= out.r_cell);
  if (!am.hit_singular && (at_outer_edge || at_band_edge)) return out;

  double const first_peak = am.value;
  while (out.r_cell > target_cell && out.levels < 6) {
    double const half_r = 0.25 * (r1 - r0);
    double const half_t = 0.25 * (t1 - t0);
    double const cr = out.radius;
    double const ct = out.theta;
    r0 = std::max(grid.r_min, cr - half_r);
    r1 = std::min(grid.r_max, cr + half_r);
    t0 = std::max(grid.theta_min, ct - half_t);
    t1 = std::min(grid.theta_max, ct + half_t);
    am = detail::scan_window(spec, r0, r1, grid.n_r, t0, t1, grid.n_theta, grid.exclude_lo, grid.exclude_hi);
    ++out.levels;
    out.radius = node_r(am.i);
    out.theta = node_t(am.j);
    out.r_cell = (r1 - r0) / (grid.n_r - 1);
    out.theta_cell = (t1 - t0) / (grid.n_theta - 1);
    bool const interior_r = (am.i > 0 || r0 == grid.r_min) && (am.i < grid.n_r - 1 || r1 == grid.r_max);
    if (!am.hit_singular && !interior_r)
      throw GridTooCoarse("locate_numerically: maximum left the refinement window; refine the base grid");
    out.peak_phi2 = am.value;
  }
  if (out.r_cell > target_cell)
    throw GridTooCoarse("locate_numerically: radial uncertainty still above 1e-3/(2m) after 6 levels");

  bool const growing = out.levels > 0 && std::pow(out.peak_phi2 / first_peak, 1.0 / out.levels) >= 1.5;
  out.divergent = am.hit_singular || std::isinf(out.peak_phi2) || out.peak_phi2 > threshold || growing;
  if (!out.divergent) return out;

  // Ring or shell: is the peak radius a spike at (almost) every angle?
  double const dr = 0.1 / (2.0 * spec.m);
  int spikes = 0;
  int samples = 0;
  for (int j = 0; j < grid.n_theta; ++j) {
    double const th = detail::linspace_node(grid.theta_min, grid.theta_max, grid.n_theta, j);
    double const here = detail::density_or_inf(GridPoint(out.radius, th), spec);
    double const lo = out.radius - dr > 0.0 ? detail::density_or_inf(GridPoint(out.radius - dr, th), spec) : 0.0;
    double const hi = detail::density_or_inf(GridPoint(out.radius + dr, th), spec);
    ++samples;
    if (here > 10.0 * std::max(lo, hi)) ++spikes;
  }
  out.shell_fraction = static_cast<double>(spikes) / samples;
  out.kind = out.shell_fraction >= 0.9 ? LocusKind::Shell : LocusKind::Ring;
  return out;
}

/// phi^2 r^2 samples and a log-log fit of phi^2 against r.
struct DecayRow {
  double r = 0.0;
  double theta = 0.0;
  double phi2_r2 = 0.0;
};

struct AsymptoticsReport {
  std::vector<DecayRow> table;
  double exponent = 0.0;        // slope of ln phi^2 vs ln r, worst over angles
  double limit_constant = 0.0;  // phi^2 r^2 at the largest tabulated radius
  double origin_phi2 = 0.0;     // phi^2 at r = 1e-8/m, theta = pi/3
};

inline double fit_loglog_slope(std::vector<double> const& x, std::vector<double> const& y) {
  double const n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double const lx = std::log(x[i]);
    double const ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline AsymptoticsReport asymptotics_report(ModelSpec const& spec, int n_fit = 41) {
  spec.validate();
  AsymptoticsReport out;
  double const m = spec.m;
  std::vector<double> const angles{pi / 4, pi / 2};
  for (double rr : {10.0, 100.0, 1000.0})
    for (double th : angles) {
      GridPoint const pt(rr / m, th);
      out.table.push_back({pt.r(), th, module_for(pt, spec) * pt.r() * pt.r()});
    }
  out.limit_constant = out.table.back().phi2_r2;

  double worst = -2.0;
  for (double th : angles) {
    std::vector<double> rs, ys;
    for (int i = 0; i < n_fit; ++i) {
      double const rr = std::pow(10.0, 1.0 + 2.0 * i / (n_fit - 1)) / m;
      rs.push_back(rr);
      ys.push_back(module_for(GridPoint(rr, th), spec));
    }
    double const slope = fit_loglog_slope(rs, ys);
    if (std::abs(slope + 2.0) >= std::abs(worst + 2.0)) worst = slope;
  }
  out.exponent = worst;
  out.origin_phi2 = module_for(GridPoint(1e-8 / m, pi / 3), spec);
  return out;
}

} // namespace nld

#endif // NLD_SINGULARITY_HPP
