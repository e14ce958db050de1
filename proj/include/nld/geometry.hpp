#ifndef NLD_GEOMETRY_HPP
#define NLD_GEOMETRY_HPP

// Flat spacetime in spherical coordinates (t, r, theta, phi), signature
// (+, -, -, -), together with the frame fields adapted to the rest frame of
// the spinor: tetrads built from the rapidity alpha and the spin tilt gamma,
// the spin connection they generate, the tensorial connection and the
// momentum covector.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

#include "clifford.hpp"
#include "errors.hpp"
#include "finite_difference.hpp"
#include "tensor.hpp"
#include "types.hpp"

namespace nld {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Diagonal metric g_mumu in coordinate order (t, r, theta, phi).
struct DiagonalMetric {
  std::array<double, 4> g{};

  double operator()(int mu) const { return g[mu]; }
  double inverse(int mu) const { return 1.0 / g[mu]; }
  double det() const { return g[0] * g[1] * g[2] * g[3]; }
  double sqrt_abs_det() const { return std::sqrt(std::abs(det())); }

  Vec4 raise(Vec4 const& v) const { return {v[0] / g[0], v[1] / g[1], v[2] / g[2], v[3] / g[3]}; }
  double dot(Vec4 const& lower_a, Vec4 const& lower_b) const { return lower_a.dot(raise(lower_b)); }
};

inline DiagonalMetric metric_at(GridPoint const& pt) {
  if (!pt.off_axis()) throw std::invalid_argument("metric_at: poles are excluded (1/sin(theta) appears)");
  double const r = pt.r();
  double const s = std::sin(pt.theta());
  return {{1.0, -1.0, -r * r, -r * r * s * s}};
}

/// Levi-Civita connection Lambda^a_{bc}, stored as (a, b, c).
inline Tensor3 christoffel_at(GridPoint const& pt) {
  pt.require_off_axis("christoffel_at");
  double const r = pt.r();
  double const s = std::sin(pt.theta());
  double const c = std::cos(pt.theta());
  Tensor3 L;
  auto set = [&L](int a, int b, int cc, double v) {
    L(a, b, cc) = v;
    L(a, cc, b) = v;
  };
  set(kTheta, kTheta, kR, 1.0 / r);
  set(kR, kTheta, kTheta, -r);
  set(kPhi, kPhi, kR, 1.0 / r);
  set(kR, kPhi, kPhi, -r * s * s);
  set(kPhi, kPhi, kTheta, c / s);
  set(kTheta, kPhi, kPhi, -c * s);
  return L;
}

/// d_d Lambda^a_{bc}, stored as (d, a, b, c); closed form.
inline Tensor4 christoffel_derivative_at(GridPoint const& pt) {
  pt.require_off_axis("christoffel_derivative_at");
  double const r = pt.r();
  double const s = std::sin(pt.theta());
  double const c = std::cos(pt.theta());
  Tensor4 dL;
  auto set = [&dL](int d, int a, int b, int cc, double v) {
    dL(d, a, b, cc) = v;
    dL(d, a, cc, b) = v;
  };
  set(kR, kTheta, kTheta, kR, -1.0 / (r * r));
  set(kR, kR, kTheta, kTheta, -1.0);
  set(kR, kPhi, kPhi, kR, -1.0 / (r * r));
  set(kR, kR, kPhi, kPhi, -s * s);
  set(kTheta, kR, kPhi, kPhi, -2.0 * r * s * c);
  set(kTheta, kPhi, kPhi, kTheta, -1.0 / (s * s));
  set(kTheta, kTheta, kPhi, kPhi, s * s - c * c);
  return dL;
}

/// R^a_{bcd} = d_c L^a_{bd} - d_d L^a_{bc} + L^a_{ce} L^e_{bd} - L^a_{de} L^e_{bc}.
inline Tensor4 riemann(Tensor3 const& L, Tensor4 const& dL) {
  Tensor4 R;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double v = dL(c, a, b, d) - dL(d, a, b, c);
          for (int e = 0; e < 4; ++e) v += L(a, c, e) * L(e, b, d) - L(a, d, e) * L(e, b, c);
          R(a, b, c, d) = v;
        }
  return R;
}

inline Tensor4 riemann_at(GridPoint const& pt) { return riemann(christoffel_at(pt), christoffel_derivative_at(pt)); }

/// Rapidity alpha and spin tilt gamma at a point, stored through their
/// hyperbolic/circular components, with first partials in r and theta.
struct KinematicAngles {
  double sinh_alpha = 0.0;
  double cosh_alpha = 1.0;
  double sin_gamma = 0.0;
  double cos_gamma = 1.0;
  double dr_alpha = 0.0;
  double dtheta_alpha = 0.0;
  double dr_gamma = 0.0;
  double dtheta_gamma = 0.0;

  double alpha() const { return std::asinh(sinh_alpha); }
  double gamma() const { return std::atan2(sin_gamma, cos_gamma); }
};

/// Separated-variable rapidity and tilt:
///   sinh a = sin th / D,  cosh a = sqrt(X^2 + 1) / D,
///   sin g  = X sin th / D, cos g = sqrt(X^2 + 1) cos th / D,
/// with D = sqrt(X^2 + cos^2 th). Partials are left at zero; see
/// analytic_derivatives() in polar.hpp.
inline KinematicAngles angles_at(double theta, double X) {
  if (!std::isfinite(X) || !std::isfinite(theta)) throw std::invalid_argument("angles_at: non-finite input");
  double const s = std::sin(theta);
  double const c = cos_theta(theta);
  double const d2 = X * X + c * c;
  if (!(d2 > 0.0)) throw SingularPoint("angles_at: X = 0 on the equatorial plane (singular ring)");
  double const d = std::sqrt(d2);
  double const w = std::sqrt(X * X + 1.0);
  KinematicAngles k;
  k.sinh_alpha = s / d;
  k.cosh_alpha = w / d;
  k.sin_gamma = X * s / d;
  k.cos_gamma = w * c / d;
  return k;
}

inline KinematicAngles angles_at(GridPoint const& pt, double X) { return angles_at(pt.theta(), X); }

/// u_mu: u_t = cosh a, u_phi = r sin th sinh a.
inline Vec4 velocity_covector(GridPoint const& pt, KinematicAngles const& k) {
  return {k.cosh_alpha, 0.0, 0.0, pt.r() * std::sin(pt.theta()) * k.sinh_alpha};
}

/// s_mu: s_r = cos g, s_theta = r sin g.
inline Vec4 spin_covector(GridPoint const& pt, KinematicAngles const& k) {
  return {0.0, k.cos_gamma, pt.r() * k.sin_gamma, 0.0};
}

/// d_mu u_i as a matrix (row mu, column i).
inline Mat4 velocity_covector_gradient(GridPoint const& pt, KinematicAngles const& k) {
  double const r = pt.r();
  double const s = std::sin(pt.theta());
  double const c = std::cos(pt.theta());
  Mat4 d = Mat4::Zero();
  d(kR, kT) = k.sinh_alpha * k.dr_alpha;
  d(kTheta, kT) = k.sinh_alpha * k.dtheta_alpha;
  d(kR, kPhi) = s * k.sinh_alpha + r * s * k.cosh_alpha * k.dr_alpha;
  d(kTheta, kPhi) = r * c * k.sinh_alpha + r * s * k.cosh_alpha * k.dtheta_alpha;
  return d;
}

inline Mat4 spin_covector_gradient(GridPoint const& pt, KinematicAngles const& k) {
  double const r = pt.r();
  Mat4 d = Mat4::Zero();
  d(kR, kR) = -k.sin_gamma * k.dr_gamma;
  d(kTheta, kR) = -k.sin_gamma * k.dtheta_gamma;
  d(kR, kTheta) = k.sin_gamma + r * k.cos_gamma * k.dr_gamma;
  d(kTheta, kTheta) = r * k.cos_gamma * k.dtheta_gamma;
  return d;
}

/// Frame fields: frame(a, mu) = xi_a^mu and coframe(a, mu) = xi^a_mu.
struct Tetrad {
  Mat4 frame;
  Mat4 coframe;
};

inline Tetrad tetrad_at(GridPoint const& pt, KinematicAngles const& k) {
  pt.require_off_axis("tetrad_at");
  double const r = pt.r();
  double const s = std::sin(pt.theta());
  Tetrad t{Mat4::Zero(), Mat4::Zero()};
  t.frame(0, kT) = k.cosh_alpha;
  t.frame(2, kT) = -k.sinh_alpha;
  t.frame(1, kR) = k.sin_gamma;
  t.frame(3, kR) = -k.cos_gamma;
  t.frame(1, kTheta) = -k.cos_gamma / r;
  t.frame(3, kTheta) = -k.sin_gamma / r;
  t.frame(0, kPhi) = -k.sinh_alpha / (r * s);
  t.frame(2, kPhi) = k.cosh_alpha / (r * s);

  t.coframe(0, kT) = k.cosh_alpha;
  t.coframe(2, kT) = k.sinh_alpha;
  t.coframe(1, kR) = k.sin_gamma;
  t.coframe(3, kR) = -k.cos_gamma;
  t.coframe(1, kTheta) = -r * k.cos_gamma;
  t.coframe(3, kTheta) = -r * k.sin_gamma;
  t.coframe(0, kPhi) = r * s * k.sinh_alpha;
  t.coframe(2, kPhi) = r * s * k.cosh_alpha;
  return t;
}

/// Spin connection C_{ab mu} (flat a, b; coordinate mu), antisymmetric in a, b.
inline Tensor3 spin_connection_at(GridPoint const& pt, KinematicAngles const& k) {
  double const th = pt.theta();
  double const sh = k.sinh_alpha;
  double const ch = k.cosh_alpha;
  // cos(theta + gamma), sin(theta + gamma) from the stored components.
  double const cg = std::cos(th) * k.cos_gamma - std::sin(th) * k.sin_gamma;
  double const sg = std::sin(th) * k.cos_gamma + std::cos(th) * k.sin_gamma;
  Tensor3 C;
  auto set = [&C](int i, int j, int mu, double v) {
    C(i, j, mu) = v;
    C(j, i, mu) = -v;
  };
  set(0, 2, kR, -k.dr_alpha);
  set(0, 2, kTheta, -k.dtheta_alpha);
  set(1, 3, kR, -k.dr_gamma);
  set(1, 3, kTheta, -(1.0 + k.dtheta_gamma));
  set(0, 1, kPhi, -cg * sh);
  set(0, 3, kPhi, -sg * sh);
  set(2, 3, kPhi, sg * ch);
  set(1, 2, kPhi, -cg * ch);
  return C;
}

/// Tensorial connection R_{nu rho mu}, all coordinate indices, antisymmetric
/// in the first pair. Only the listed families are non-zero.
inline Tensor3 tensorial_connection_at(GridPoint const& pt, KinematicAngles const& k) {
  double const r = pt.r();
  double const s = std::sin(pt.theta());
  double const c = std::cos(pt.theta());
  Tensor3 R;
  auto set = [&R](int i, int j, int mu, double v) {
    R(i, j, mu) = v;
    R(j, i, mu) = -v;
  };
  set(kTheta, kPhi, kPhi, -r * r * c * s);
  set(kR, kPhi, kPhi, -r * s * s);
  set(kR, kTheta, kTheta, -r * (1.0 + k.dtheta_gamma));
  set(kTheta, kR, kR, r * k.dr_gamma);
  set(kT, kPhi, kTheta, r * s * k.dtheta_alpha);
  set(kT, kPhi, kR, r * s * k.dr_alpha);
  return R;
}

/// Convert a coordinate (nu rho mu) tensorial connection to flat (a b mu):
/// R_{ab mu} = xi_a^nu xi_b^rho R_{nu rho mu}.
inline Tensor3 to_flat_pair(Tensor3 const& coord, Tetrad const& t) {
  Tensor3 out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int mu = 0; mu < 4; ++mu) {
        double v = 0.0;
        for (int nu = 0; nu < 4; ++nu)
          for (int rho = 0; rho < 4; ++rho) v += t.frame(a, nu) * t.frame(b, rho) * coord(nu, rho, mu);
        out(a, b, mu) = v;
      }
  return out;
}

/// Inverse of to_flat_pair: R_{nu rho mu} = xi^a_nu xi^b_rho R_{ab mu}.
inline Tensor3 to_coordinate_pair(Tensor3 const& flat, Tetrad const& t) {
  Tensor3 out;
  for (int nu = 0; nu < 4; ++nu)
    for (int rho = 0; rho < 4; ++rho)
      for (int mu = 0; mu < 4; ++mu) {
        double v = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) v += t.coframe(a, nu) * t.coframe(b, rho) * flat(a, b, mu);
        out(nu, rho, mu) = v;
      }
  return out;
}

/// P_mu = (E, 0, 0, l).
inline Vec4 momentum_covector(ModelSpec const& spec) { return {spec.E, 0.0, 0.0, spec.l}; }

/// Coordinate Levi-Civita tensor eps_{mu nu rho sigma} = sqrt|g| [mu nu rho sigma]
/// with eps_{t r theta phi} > 0; agrees with eps_abcd contracted with the
/// co-tetrad, whose determinant is +sqrt|g|.
inline double levi_civita_coordinate(DiagonalMetric const& g, int a, int b, int c, int d) {
  return g.sqrt_abs_det() * levi_civita(a, b, c, d);
}

/// Residuals of the transport identities
///   nabla_mu s_i = s^j R_{ji mu},  nabla_mu u_i = u^j R_{ji mu},
/// evaluated with the analytic gradients of u and s (max abs component).
struct TransportResidual {
  double velocity = 0.0;
  double spin = 0.0;

  double max() const { return std::max(velocity, spin); }
};

namespace detail {

inline double transport_defect(Vec4 const& v, Mat4 const& dv, DiagonalMetric const& g, Tensor3 const& L,
                               Tensor3 const& R) {
  Vec4 const up = g.raise(v);
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int i = 0; i < 4; ++i) {
      double cov = dv(mu, i);
      for (int rho = 0; rho < 4; ++rho) cov -= L(rho, i, mu) * v[rho];
      double rhs = 0.0;
      for (int j = 0; j < 4; ++j) rhs += up[j] * R(j, i, mu);
      worst = std::max(worst, std::abs(cov - rhs));
    }
  return worst;
}

} // namespace detail

inline TransportResidual transport_residual(GridPoint const& pt, KinematicAngles const& k) {
  DiagonalMetric const g = metric_at(pt);
  Tensor3 const L = christoffel_at(pt);
  Tensor3 const R = tensorial_connection_at(pt, k);
  return {detail::transport_defect(velocity_covector(pt, k), velocity_covector_gradient(pt, k), g, L, R),
          detail::transport_defect(spin_covector(pt, k), spin_covector_gradient(pt, k), g, L, R)};
}

/// Norms of the right sides of the curvature and field-strength relations
///   R^i_{j mu nu} = -(nabla_mu R^i_{j nu} - nabla_nu R^i_{j mu}
///                     + R^i_{k mu} R^k_{j nu} - R^i_{k nu} R^k_{j mu})
///   qF_{mu nu}    = -(nabla_mu P_nu - nabla_nu P_mu)
/// reported as the largest component of (right side - Riemann), each taken
/// relative to 1 + the sum of the magnitudes of the terms it is built from,
/// and the largest component of the strength. Both fields depend on (r, theta) only; their r and theta
/// derivatives are Richardson-extrapolated central differences.
struct CurvatureResidual {
  double curvature = 0.0;
  double strength = 0.0;

  double max() const { return std::max(curvature, strength); }
};

namespace detail {

inline Tensor3 raise_first(Tensor3 const& R, DiagonalMetric const& g) {
  Tensor3 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int mu = 0; mu < 4; ++mu) out(i, j, mu) = g.inverse(i) * R(i, j, mu);
  return out;
}

} // namespace detail

/// RField: GridPoint -> Tensor3 (coordinate R_{nu rho mu});
/// PField: GridPoint -> Vec4 (P_mu).
template <class RField, class PField>
CurvatureResidual curvature_residual(GridPoint const& pt, RField&& r_field, PField&& p_field,
                                     FdSteps const& steps = {}) {
  DiagonalMetric const g = metric_at(pt);
  Tensor3 const L = christoffel_at(pt);
  Tensor3 const Rm = detail::raise_first(r_field(pt), g);

  auto mixed_at = [&](double r, double th) {
    GridPoint const q(r, th);
    return detail::raise_first(r_field(q), metric_at(q));
  };
  // dR(mu) = d_mu R^i_{j nu}
  std::array<Tensor3, 4> dR{};
  dR[kR] = richardson_derivative([&](double r) { return mixed_at(r, pt.theta()); }, pt.r(),
                                 steps.r_rel * pt.r(), steps.convergence_tol);
  dR[kTheta] = richardson_derivative([&](double th) { return mixed_at(pt.r(), th); }, pt.theta(),
                                     steps.theta, steps.convergence_tol);

  // nabla_mu R^i_{j nu}, stored as cov[mu](i, j, nu).
  std::array<Tensor3, 4> cov{};
  for (int mu = 0; mu < 4; ++mu)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int nu = 0; nu < 4; ++nu) {
          double v = dR[mu](i, j, nu);
          for (int k = 0; k < 4; ++k)
            v += L(i, k, mu) * Rm(k, j, nu) - L(k, j, mu) * Rm(i, k, nu) - L(k, nu, mu) * Rm(i, j, k);
          cov[mu](i, j, nu) = v;
        }

  Tensor4 const riem = riemann_at(pt);
  double curvature = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          double rhs = cov[mu](i, j, nu) - cov[nu](i, j, mu);
          double scale = 1.0 + std::abs(cov[mu](i, j, nu)) + std::abs(cov[nu](i, j, mu));
          for (int k = 0; k < 4; ++k) {
            rhs += Rm(i, k, mu) * Rm(k, j, nu) - Rm(i, k, nu) * Rm(k, j, mu);
            scale += std::abs(Rm(i, k, mu) * Rm(k, j, nu)) + std::abs(Rm(i, k, nu) * Rm(k, j, mu));
          }
          curvature = std::max(curvature, std::abs(-rhs - riem(i, j, mu, nu)) / scale);
        }

  // The Christoffel terms cancel in the antisymmetrised derivative of P.
  std::array<Vec4, 4> dP{Vec4::Zero(), Vec4::Zero(), Vec4::Zero(), Vec4::Zero()};
  dP[kR] = richardson_derivative([&](double r) { return Vec4(p_field(GridPoint(r, pt.theta()))); }, pt.r(),
                                 steps.r_rel * pt.r(), steps.convergence_tol);
  dP[kTheta] = richardson_derivative([&](double th) { return Vec4(p_field(GridPoint(pt.r(), th))); },
                                     pt.theta(), steps.theta, steps.convergence_tol);
  double strength = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) strength = std::max(strength, std::abs(dP[mu][nu] - dP[nu][mu]));

  return {curvature, strength};
}

} // namespace nld

#endif // NLD_GEOMETRY_HPP
