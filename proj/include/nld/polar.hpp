#ifndef NLD_POLAR_HPP
#define NLD_POLAR_HPP

// Polar variables of the separated-variable solutions.
//
// The radial field X(r) fixes the rapidity, spin tilt and chiral angle
// through
//   sin b = -cos th / D,   cos b = X / D,   D = sqrt(X^2 + cos^2 th),
// and the module phi^2 follows one of three laws:
//   N-JL:           phi^2 = 2 / (r D)
//   Soler:          phi^2 = D G(r)
//   interpolating:  phi^2 = 2 D / (r (X^2 + p cos^2 th))
// The closed-form solution is X = sinh(ln 2mr) = (2mr - 1/(2mr)) / 2 with the
// Soler companion G = 2 / (r X^2).

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <stdexcept>

#include "clifford.hpp"
#include "errors.hpp"
#include "finite_difference.hpp"
#include "geometry.hpp"
#include "types.hpp"

namespace nld {

/// X and G with their radial derivatives at one radius. G is NaN when the
/// profile does not carry a Soler companion field.
struct RadialSample {
  double X = 0.0;
  double dX = 0.0;
  double G = std::numeric_limits<double>::quiet_NaN();
  double dG = std::numeric_limits<double>::quiet_NaN();
};

template <class P>
concept RadialProfile = requires(P const& profile, double r) {
  { profile.at(r) } -> std::convertible_to<RadialSample>;
};

inline double X_exact(double r, ModelSpec const& spec) {
  if (!(r > 0.0)) throw std::invalid_argument("X_exact: r must be positive");
  double const x = 2.0 * spec.m * r;
  return 0.5 * (x - 1.0 / x);
}

inline double dX_exact(double r, ModelSpec const& spec) { return spec.m + 1.0 / (4.0 * spec.m * r * r); }

inline double G_exact(double r, ModelSpec const& spec) {
  double const X = X_exact(r, spec);
  if (X == 0.0) throw SingularG("G_exact: G = 2/(r X^2) diverges at 2mr = 1");
  double const G = 2.0 / (r * X * X);
  if (!std::isfinite(G)) throw SingularG("G_exact: G overflows next to 2mr = 1");
  return G;
}

/// Closed-form profile X = sinh(ln 2mr + shift); shift = 0 is the exact
/// solution, a non-zero shift is a controlled perturbation of it. G follows
/// the companion law 2 / (r X^2) either way.
struct ClosedFormProfile {
  double m = 1.0;
  double zeta_shift = 0.0;

  RadialSample at(double r) const {
    RadialSample s;
    if (zeta_shift == 0.0) {
      ModelSpec const spec{m, 1.0, m, 0.5};
      s.X = X_exact(r, spec);
      s.dX = dX_exact(r, spec);
    } else {
      double const z = std::log(2.0 * m * r) + zeta_shift;
      s.X = std::sinh(z);
      s.dX = std::cosh(z) / r;
    }
    if (s.X != 0.0) {
      s.G = 2.0 / (r * s.X * s.X);
      s.dG = s.G * (-1.0 / r - 2.0 * s.dX / s.X);
    } else {
      s.G = s.dG = std::numeric_limits<double>::infinity();
    }
    return s;
  }
};

/// phi^2 with its logarithmic derivatives, r d_r ln phi^2 and d_theta ln phi^2.
struct ModuleSample {
  double phi2 = 0.0;
  double r_dr_ln = 0.0;
  double dtheta_ln = 0.0;
};

enum class ModuleLaw { Njl, Soler, Interpolating };

inline ModuleLaw module_law_for(Model model) { return model == Model::NJL ? ModuleLaw::Njl : ModuleLaw::Soler; }

namespace detail {

inline void require_regular(double value, char const* who) {
  if (!std::isfinite(value) || !(value > 0.0))
    throw SingularPoint(std::string(who) + ": module is singular at this point");
}

} // namespace detail

/// phi^2 = 2 / (r sqrt(X^2 + cos^2 th)).
inline ModuleSample module_ansatz_njl(double r, double theta, double X, double r_dX) {
  double const c = cos_theta(theta);
  double const s = std::sin(theta);
  double const d2 = X * X + c * c;
  if (!(d2 > 0.0)) throw SingularPoint("module_ansatz_njl: X = 0 and cos(theta) = 0");
  ModuleSample out{2.0 / (r * std::sqrt(d2)), -1.0 - X * r_dX / d2, c * s / d2};
  detail::require_regular(out.phi2, "module_ansatz_njl");
  return out;
}

/// phi^2 = sqrt(X^2 + cos^2 th) G.
inline ModuleSample module_ansatz_soler(double theta, double X, double r_dX, double G, double r_dG) {
  double const c = cos_theta(theta);
  double const s = std::sin(theta);
  double const d2 = X * X + c * c;
  if (!(d2 > 0.0)) throw SingularPoint("module_ansatz_soler: X = 0 and cos(theta) = 0");
  if (!std::isfinite(G) || G == 0.0) throw SingularPoint("module_ansatz_soler: G is zero or not finite");
  ModuleSample out{std::sqrt(d2) * G, X * r_dX / d2 + r_dG / G, -c * s / d2};
  detail::require_regular(out.phi2, "module_ansatz_soler");
  return out;
}

/// phi^2 = 2 sqrt(X^2 + cos^2 th) / (r (X^2 + p cos^2 th)).
inline ModuleSample module_ansatz_general_p(double r, double theta, double X, double r_dX, double p) {
  double const c = cos_theta(theta);
  double const s = std::sin(theta);
  double const d2 = X * X + c * c;
  double const q = X * X + p * c * c;
  if (!(q > 0.0) || !(d2 > 0.0)) throw SingularPoint("module_ansatz_general_p: X^2 + p cos^2 theta = 0");
  ModuleSample out{2.0 * std::sqrt(d2) / (r * q), X * r_dX / d2 - 1.0 - 2.0 * X * r_dX / q,
                   -c * s / d2 + 2.0 * p * c * s / q};
  detail::require_regular(out.phi2, "module_ansatz_general_p");
  return out;
}

namespace detail {

/// 16 m^4 r^4 + 8 m^2 r^2 cos 2th + 1, written as the sum of squares
/// (4 m^2 r^2 - 1)^2 + 16 m^2 r^2 cos^2 th so that it is never negative.
inline double module_radicand(double r, double theta, double m) {
  double const u = 4.0 * m * m * r * r;
  double const c = cos_theta(theta);
  return (u - 1.0) * (u - 1.0) + 4.0 * u * c * c;
}

} // namespace detail

/// N-JL matter density 8m / sqrt(16 m^4 r^4 + 8 m^2 r^2 cos 2th + 1).
inline double module_njl(GridPoint const& pt, ModelSpec const& spec) {
  double const rad = detail::module_radicand(pt.r(), pt.theta(), spec.m);
  if (!(rad > 0.0)) throw SingularPoint("module_njl: singular ring (2mr = 1, cos theta = 0)");
  double const phi2 = 8.0 * spec.m / std::sqrt(rad);
  detail::require_regular(phi2, "module_njl");
  return phi2;
}

/// Soler matter density 8m sqrt(16 m^4 r^4 + 8 m^2 r^2 cos 2th + 1) / (4 m^2 r^2 - 1)^2.
inline double module_soler(GridPoint const& pt, ModelSpec const& spec) {
  double const u = 4.0 * spec.m * spec.m * pt.r() * pt.r();
  double const den = (u - 1.0) * (u - 1.0);
  if (!(den > 0.0)) throw SingularPoint("module_soler: singular shell 2mr = 1");
  double const phi2 = 8.0 * spec.m * std::sqrt(detail::module_radicand(pt.r(), pt.theta(), spec.m)) / den;
  detail::require_regular(phi2, "module_soler");
  return phi2;
}

/// Interpolating-model density with zeta = ln 2mr, X = sinh zeta.
inline double module_general_p(GridPoint const& pt, ModelSpec const& spec) {
  double const X = X_exact(pt.r(), spec);
  return module_ansatz_general_p(pt.r(), pt.theta(), X, 0.0, spec.p).phi2;
}

/// Partials of the polar angles for a radial X(r):
///   d_th g = X sqrt(X^2+1) / D^2          r d_r g = cos th sin th / D^2 * rX' / sqrt(X^2+1)
///   d_th a = sqrt(X^2+1) cos th / D^2     r d_r a = -X sin th / D^2 * rX' / sqrt(X^2+1)
///   d_th b = X sin th / D^2               r d_r b = rX' cos th / D^2
/// with D^2 = X^2 + cos^2 th. r d_r zeta = rX' / sqrt(X^2+1) for X = sinh zeta.
struct PolarDerivatives {
  double dtheta_gamma = 0.0;
  double r_dr_gamma = 0.0;
  double dtheta_alpha = 0.0;
  double r_dr_alpha = 0.0;
  double dtheta_beta = 0.0;
  double r_dr_beta = 0.0;
  double r_dr_zeta = 0.0;
};

inline PolarDerivatives analytic_derivatives(double theta, double X, double r_dX) {
  double const c = cos_theta(theta);
  double const s = std::sin(theta);
  double const d2 = X * X + c * c;
  if (!(d2 > 0.0)) throw SingularPoint("analytic_derivatives: X = 0 and cos(theta) = 0");
  double const w = std::sqrt(X * X + 1.0);
  double const rz = r_dX / w;
  return {X * w / d2, c * s / d2 * rz, w * c / d2, -X * s / d2 * rz, X * s / d2, r_dX * c / d2, rz};
}

/// Every polar quantity needed by the field equations at one point.
struct PolarFields {
  GridPoint pt{1.0, pi / 2};
  ModelSpec spec{};
  double X = 0.0;
  double dX = 0.0;
  KinematicAngles angles{};
  double sin_beta = 0.0;
  double cos_beta = 1.0;
  double dr_beta = 0.0;
  double dtheta_beta = 0.0;
  /// phi^2 as it enters the nonlinear terms; the log-derivatives below are
  /// kept separately so the nonlinearity can be switched off on its own.
  double phi2 = 0.0;
  double dr_ln_phi2 = 0.0;
  double dtheta_ln_phi2 = 0.0;

  double beta() const { return std::atan2(sin_beta, cos_beta); }
};

/// Assemble PolarFields from a radial profile and a module law. The
/// Soler law needs G from the profile; the interpolating law uses spec.p.
template <RadialProfile Profile>
PolarFields polar_fields(Profile const& profile, GridPoint const& pt, ModelSpec const& spec, ModuleLaw law) {
  RadialSample const rs = profile.at(pt.r());
  double const r = pt.r();
  double const th = pt.theta();
  double const c = cos_theta(th);
  double const d2 = rs.X * rs.X + c * c;
  if (!(d2 > 0.0)) throw SingularPoint("polar_fields: X = 0 on the equatorial plane");
  double const d = std::sqrt(d2);

  PolarFields f;
  f.pt = pt;
  f.spec = spec;
  f.X = rs.X;
  f.dX = rs.dX;
  f.angles = angles_at(th, rs.X);
  PolarDerivatives const pd = analytic_derivatives(th, rs.X, r * rs.dX);
  f.angles.dtheta_alpha = pd.dtheta_alpha;
  f.angles.dr_alpha = pd.r_dr_alpha / r;
  f.angles.dtheta_gamma = pd.dtheta_gamma;
  f.angles.dr_gamma = pd.r_dr_gamma / r;
  f.sin_beta = -c / d;
  f.cos_beta = rs.X / d;
  f.dtheta_beta = pd.dtheta_beta;
  f.dr_beta = pd.r_dr_beta / r;

  ModuleSample ms;
  switch (law) {
  case ModuleLaw::Njl:
    ms = module_ansatz_njl(r, th, rs.X, r * rs.dX);
    break;
  case ModuleLaw::Soler:
    ms = module_ansatz_soler(th, rs.X, r * rs.dX, rs.G, r * rs.dG);
    break;
  case ModuleLaw::Interpolating:
    ms = module_ansatz_general_p(r, th, rs.X, r * rs.dX, spec.p);
    break;
  }
  f.phi2 = ms.phi2;
  f.dr_ln_phi2 = ms.r_dr_ln / r;
  f.dtheta_ln_phi2 = ms.dtheta_ln;
  return f;
}

inline PolarFields exact_fields(GridPoint const& pt, ModelSpec const& spec, ModuleLaw law) {
  return polar_fields(ClosedFormProfile{spec.m, 0.0}, pt, spec, law);
}

/// Time and azimuth of an event; the solutions depend on them only through
/// the phase exp(-i (m t + phi / 2)).
struct PhaseCoordinates {
  double t = 0.0;
  double azimuth = 0.0;
};

/// psi = phi exp(-i (m t + phi_az / 2)) exp(-i beta pi / 2) (1, 0, 1, 0)^T.
/// beta = atan2(sin b, cos b) lies in (-pi, pi], so the half-angle (and the
/// overall sign of psi) jumps across the half-plane theta = pi/2, 2mr < 1:
/// the spinor changes sign on a loop around the singular ring.
inline Spinor spinor_from_polar(double phi2, double sin_beta, double cos_beta, double m, PhaseCoordinates ph = {}) {
  if (!(phi2 >= 0.0) || !std::isfinite(phi2)) throw SingularPoint("assemble_spinor: module is not finite");
  double const half = 0.5 * std::atan2(sin_beta, cos_beta);
  cplx const phase = std::polar(std::sqrt(phi2), -(m * ph.t + 0.5 * ph.azimuth));
  // exp(-i beta pi / 2) with pi = diag(-1, -1, 1, 1).
  cplx const up = std::polar(1.0, half);
  cplx const down = std::polar(1.0, -half);
  Spinor psi;
  psi << phase * up, 0.0, phase * down, 0.0;
  return psi;
}

inline Spinor assemble_spinor(PolarFields const& f, PhaseCoordinates ph = {}) {
  return spinor_from_polar(f.phi2, f.sin_beta, f.cos_beta, f.spec.m, ph);
}

/// d_mu psi from the closed-form dependence of psi on (ln phi, beta, phase):
/// d_mu psi = (d_mu ln phi - (i/2) d_mu beta pi - i k_mu) psi with
/// k = (m, 0, 0, 1/2).
inline std::array<Spinor, 4> spinor_gradient(PolarFields const& f, PhaseCoordinates ph = {}) {
  Spinor const psi = assemble_spinor(f, ph);
  ComplexMatrix const& p = chiral_pi();
  std::array<double, 4> const dln{0.0, 0.5 * f.dr_ln_phi2, 0.5 * f.dtheta_ln_phi2, 0.0};
  std::array<double, 4> const dbeta{0.0, f.dr_beta, f.dtheta_beta, 0.0};
  std::array<double, 4> const k{f.spec.m, 0.0, 0.0, 0.5};
  std::array<Spinor, 4> out;
  for (int mu = 0; mu < 4; ++mu) {
    ComplexMatrix const op = cplx(dln[mu], -k[mu]) * ComplexMatrix::Identity() - cplx(0.0, 0.5 * dbeta[mu]) * p;
    out[mu] = op * psi;
  }
  return out;
}

/// Sign s in nabla_mu psi = d_mu psi + (s/2) C_{ab mu} sigma^{ab} psi.
/// Fixed once by calibrate_spin_connection_sign() (equations.hpp).
inline constexpr int kSpinConnectionSign = +1;

/// (1/2) sign C_{ab mu} sigma^{ab} for one coordinate direction mu.
inline ComplexMatrix spin_connection_term(Tensor3 const& C, int mu, int sign = kSpinConnectionSign) {
  ComplexMatrix out = ComplexMatrix::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (C(a, b, mu) != 0.0) out += (0.5 * sign * C(a, b, mu)) * sigma_upper(a, b);
  return out;
}

/// Flip the overall sign of a sample so that it lies on the same branch as
/// the reference (see spinor_from_polar).
inline Spinor align_branch(Spinor sample, Spinor const& reference) {
  if (std::real(reference.dot(sample)) < 0.0) sample = -sample;
  return sample;
}

/// Largest component of
///   nabla_mu psi - (d_mu ln phi - (i/2) d_mu beta pi - i P_mu - (1/2) R_{ij mu} sigma^{ij}) psi
/// over mu, where nabla_mu psi is built from central differences of the
/// assembled spinor plus the spin-connection term, and the right side uses
/// the analytic polar derivatives, P from the model and R from the tensorial
/// connection converted to frame indices. The residual is divided by
/// max(1, largest |psi| component) so that it does not grow with the density near the singular locus.
template <RadialProfile Profile>
double polar_decomposition_residual(Profile const& profile, GridPoint const& pt, ModelSpec const& spec, ModuleLaw law,
                                    FdSteps const& steps = {}, PhaseCoordinates ph = {}) {
  PolarFields const f = polar_fields(profile, pt, spec, law);
  Spinor const psi = assemble_spinor(f, ph);

  auto spinor_at = [&](double r, double th, PhaseCoordinates q) {
    return align_branch(assemble_spinor(polar_fields(profile, GridPoint(r, th), spec, law), q), psi);
  };
  std::array<Spinor, 4> dpsi;
  dpsi[kT] = richardson_derivative([&](double t) { return spinor_at(pt.r(), pt.theta(), {t, ph.azimuth}); },
                                   ph.t, steps.theta, steps.convergence_tol);
  dpsi[kR] = richardson_derivative([&](double r) { return spinor_at(r, pt.theta(), ph); }, pt.r(),
                                   steps.r_rel * pt.r(), steps.convergence_tol);
  dpsi[kTheta] = richardson_derivative([&](double th) { return spinor_at(pt.r(), th, ph); }, pt.theta(),
                                       steps.theta, steps.convergence_tol);
  dpsi[kPhi] = richardson_derivative([&](double az) { return spinor_at(pt.r(), pt.theta(), {ph.t, az}); },
                                     ph.azimuth, steps.theta, steps.convergence_tol);

  Tetrad const tet = tetrad_at(pt, f.angles);
  Tensor3 const C = spin_connection_at(pt, f.angles);
  Tensor3 const R = to_flat_pair(tensorial_connection_at(pt, f.angles), tet);
  Vec4 const P = momentum_covector(spec);
  std::array<double, 4> const dln{0.0, 0.5 * f.dr_ln_phi2, 0.5 * f.dtheta_ln_phi2, 0.0};
  std::array<double, 4> const dbeta{0.0, f.dr_beta, f.dtheta_beta, 0.0};
  ComplexMatrix const& p = chiral_pi();

  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    Spinor const lhs = dpsi[mu] + spin_connection_term(C, mu) * psi;
    ComplexMatrix const op = cplx(dln[mu], -P[mu]) * ComplexMatrix::Identity() - cplx(0.0, 0.5 * dbeta[mu]) * p -
                             spin_connection_term(R, mu, +1);
    Spinor const rhs = op * psi;
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst / std::max(1.0, psi.cwiseAbs().maxCoeff());
}

} // namespace nld

#endif // NLD_POLAR_HPP
