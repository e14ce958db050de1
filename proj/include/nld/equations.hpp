#ifndef NLD_EQUATIONS_HPP
#define NLD_EQUATIONS_HPP

// Residual evaluators for the four equivalent forms of the field equations:
//
//   covector   the polar-form vector equations (beta / B_mu and
//              ln phi^2 / R_mu pairs) in coordinate components,
//   expanded   their four scalar projections on the spherical background,
//   reduced    the zeta-substituted system of the interpolating model,
//   standard   i gamma^mu nabla_mu psi + (Phi + i p Theta pi) psi / 4 - m psi.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "clifford.hpp"
#include "geometry.hpp"
#include "polar.hpp"
#include "types.hpp"

namespace nld {

/// Points within these distances of a singular locus are excluded from
/// aggregate statistics: |2mr - 1| < radial, and for p > 0 additionally
/// |cos th| < angular (the singular set is then only a ring).
struct SingularMask {
  double radial = 0.02;
  double angular = 0.02;

  bool masked(GridPoint const& pt, ModelSpec const& spec) const {
    bool const near_radius = std::abs(2.0 * spec.m * pt.r() - 1.0) < radial;
    if (spec.p == 0.0) return near_radius;
    return near_radius && std::abs(std::cos(pt.theta())) < angular;
  }
};

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

/// Per-equation residual norms at a point.
struct ResidualVector {
  GridPoint pt{1.0, pi / 2};
  bool masked = false;
  std::vector<NamedResidual> residuals;

  double max() const {
    double m = 0.0;
    for (auto const& r : residuals) m = std::max(m, r.value);
    return m;
  }

  double operator[](std::string const& name) const {
    for (auto const& r : residuals)
      if (r.name == name) return r.value;
    throw std::out_of_range("ResidualVector: no residual named " + name);
  }
};

// ---------------------------------------------------------------------------
// Covector form

/// Left sides of the two polar vector equations, coordinate components.
struct PolarCovectorEquations {
  Vec4 chiral; // nabla beta + B + ... (dep1)
  Vec4 module; // nabla ln phi^2 + R + ... (dep2)
};

/// B_mu = eps_{mu a n i} R^{a n i} / 2 and R_mu = R_{mu nu}^nu.
struct ConnectionTraces {
  Vec4 axial = Vec4::Zero();
  Vec4 trace = Vec4::Zero();
};

inline ConnectionTraces connection_traces(GridPoint const& pt, Tensor3 const& R) {
  DiagonalMetric const g = metric_at(pt);
  ConnectionTraces out;
  for (int mu = 0; mu < 4; ++mu) {
    double axial = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int n = 0; n < 4; ++n)
        for (int i = 0; i < 4; ++i) {
          double const eps = levi_civita_coordinate(g, mu, a, n, i);
          if (eps != 0.0) axial += eps * g.inverse(a) * g.inverse(n) * g.inverse(i) * R(a, n, i);
        }
    out.axial[mu] = 0.5 * axial;
    double trace = 0.0;
    for (int n = 0; n < 4; ++n) trace += R(mu, n, n) * g.inverse(n);
    out.trace[mu] = trace;
  }
  return out;
}

inline PolarCovectorEquations polar_covector_equations(PolarFields const& f, Model model) {
  GridPoint const& pt = f.pt;
  DiagonalMetric const g = metric_at(pt);
  Vec4 const u = velocity_covector(pt, f.angles);
  Vec4 const s = spin_covector(pt, f.angles);
  Vec4 const P = momentum_covector(f.spec);
  Vec4 const u_up = g.raise(u);
  Vec4 const s_up = g.raise(s);
  Vec4 const P_up = g.raise(P);
  ConnectionTraces const tr = connection_traces(pt, tensorial_connection_at(pt, f.angles));

  double const Ps = P_up.dot(s);
  double const Pu = P_up.dot(u);
  double const m = f.spec.m;
  Vec4 const dbeta{0.0, f.dr_beta, f.dtheta_beta, 0.0};
  Vec4 const dln{0.0, f.dr_ln_phi2, f.dtheta_ln_phi2, 0.0};

  Vec4 vortical = Vec4::Zero(); // P^rho u^nu s^alpha eps_{mu rho nu alpha}
  for (int mu = 0; mu < 4; ++mu)
    for (int rho = 0; rho < 4; ++rho)
      for (int nu = 0; nu < 4; ++nu)
        for (int al = 0; al < 4; ++al) {
          double const eps = levi_civita_coordinate(g, mu, rho, nu, al);
          if (eps != 0.0) vortical[mu] += eps * P_up[rho] * u_up[nu] * s_up[al];
        }

  PolarCovectorEquations out;
  out.chiral = dbeta + tr.axial + 2.0 * Ps * u - 2.0 * Pu * s;
  out.module = dln + tr.trace - 2.0 * vortical;
  if (model == Model::NJL) {
    out.chiral += (-f.phi2 + 2.0 * m * f.cos_beta) * s;
    out.module += 2.0 * m * f.sin_beta * s;
  } else {
    double const shifted = 2.0 * m - f.phi2 * f.cos_beta;
    out.chiral += shifted * f.cos_beta * s;
    out.module += shifted * f.sin_beta * s;
  }
  return out;
}

/// Covector residuals as norms of the orthonormal-frame components
/// xi_a^mu V_mu of each equation.
inline ResidualVector residual_polar_covector(PolarFields const& f, Model model, SingularMask const& mask = {}) {
  PolarCovectorEquations const eq = polar_covector_equations(f, model);
  Tetrad const t = tetrad_at(f.pt, f.angles);
  ResidualVector out;
  out.pt = f.pt;
  out.masked = mask.masked(f.pt, f.spec);
  out.residuals = {{"chiral", (t.frame * eq.chiral).cwiseAbs().maxCoeff()},
                   {"module", (t.frame * eq.module).cwiseAbs().maxCoeff()}};
  return out;
}

// ---------------------------------------------------------------------------
// Expanded scalar form

/// The four scalar equations (a, b, c, d) on the spherical background, with
/// E and l taken from the spec.
inline std::array<double, 4> expanded_equations(PolarFields const& f, Model model) {
  double const r = f.pt.r();
  double const s = std::sin(f.pt.theta());
  double const c = cos_theta(f.pt.theta());
  double const E = f.spec.E;
  double const l = f.spec.l;
  double const m = f.spec.m;
  KinematicAngles const& k = f.angles;
  double const sb = f.sin_beta;
  double const cb = f.cos_beta;

  double const kinetic = -2.0 * E * r * k.cosh_alpha + 2.0 * l * k.sinh_alpha / s;
  double const vortical = 2.0 * E * r * k.sinh_alpha - 2.0 * l * k.cosh_alpha / s;

  double chiral_mass = 0.0;
  double module_c = 0.0;
  double module_d = 0.0;
  if (model == Model::NJL) {
    chiral_mass = -r * f.phi2 + 2.0 * m * r * cb;
    module_c = 2.0 * m * r * k.cos_gamma * sb;
    module_d = 2.0 * m * r * k.sin_gamma * sb;
  } else {
    chiral_mass = 2.0 * m * r * cb - r * f.phi2 * cb * cb;
    module_c = 2.0 * m * r * sb * k.cos_gamma - r * f.phi2 * sb * cb * k.cos_gamma;
    module_d = 2.0 * m * r * sb * k.sin_gamma - r * f.phi2 * sb * cb * k.sin_gamma;
  }

  double const a = r * f.dr_beta + k.dtheta_alpha + (kinetic + chiral_mass) * k.cos_gamma;
  double const b = f.dtheta_beta - r * k.dr_alpha + (kinetic + chiral_mass) * k.sin_gamma;
  double const cc = r * f.dr_ln_phi2 + 2.0 + module_c + k.dtheta_gamma - vortical * k.sin_gamma;
  double const d = f.dtheta_ln_phi2 + c / s + module_d - r * k.dr_gamma + vortical * k.cos_gamma;
  return {a, b, cc, d};
}

inline ResidualVector residual_expanded(PolarFields const& f, Model model, SingularMask const& mask = {}) {
  auto const e = expanded_equations(f, model);
  ResidualVector out;
  out.pt = f.pt;
  out.masked = mask.masked(f.pt, f.spec);
  out.residuals = {{"a", std::abs(e[0])}, {"b", std::abs(e[1])}, {"c", std::abs(e[2])}, {"d", std::abs(e[3])}};
  return out;
}

/// The covector equations projected the way the expanded system is written:
/// (r dep1_r, dep1_theta, r dep2_r, dep2_theta), followed by the t and phi
/// components of both (which the symmetric configuration makes vanish).
struct CovectorProjection {
  std::array<double, 4> expanded_basis{};
  std::array<double, 4> transverse{}; // dep1_t, dep1_phi, dep2_t, dep2_phi
};

inline CovectorProjection project_covector(PolarFields const& f, Model model) {
  PolarCovectorEquations const eq = polar_covector_equations(f, model);
  double const r = f.pt.r();
  return {{r * eq.chiral[kR], eq.chiral[kTheta], r * eq.module[kR], eq.module[kTheta]},
          {eq.chiral[kT], eq.chiral[kPhi], eq.module[kT], eq.module[kPhi]}};
}

// ---------------------------------------------------------------------------
// Standard gamma-matrix form

/// | i gamma^mu nabla_mu psi + (1/4)(Phi + i p Theta pi) psi - m psi |_max,
/// gamma^mu = xi_a^mu gamma^a. dpsi holds d_mu psi; Phi and Theta are the
/// bilinears of psi.
inline double standard_residual_from(Spinor const& psi, std::array<Spinor, 4> const& dpsi, PolarFields const& f,
                                     double p, int spin_sign = kSpinConnectionSign) {
  Tetrad const t = tetrad_at(f.pt, f.angles);
  Tensor3 const C = spin_connection_at(f.pt, f.angles);
  BilinearSet const b = bilinears(psi);
  Spinor total = Spinor::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    ComplexMatrix gmu = ComplexMatrix::Zero();
    for (int a = 0; a < 4; ++a)
      if (t.frame(a, mu) != 0.0) gmu += t.frame(a, mu) * gamma_upper(a);
    Spinor const cov = dpsi[mu] + spin_connection_term(C, mu, spin_sign) * psi;
    total += cplx(0.0, 1.0) * (gmu * cov);
  }
  ComplexMatrix const nonlinear =
      0.25 * (b.phi * ComplexMatrix::Identity() + cplx(0.0, p * b.theta) * chiral_pi());
  total += nonlinear * psi - f.spec.m * psi;
  return total.cwiseAbs().maxCoeff();
}

/// Standard-form residual with the spinor derivatives taken analytically
/// from the polar fields.
inline double residual_standard(PolarFields const& f, double p, int spin_sign = kSpinConnectionSign,
                                PhaseCoordinates ph = {}) {
  return standard_residual_from(assemble_spinor(f, ph), spinor_gradient(f, ph), f, p, spin_sign);
}

/// Same residual with d_mu psi from Richardson central differences of the
/// assembled spinor (cross-check path).
template <RadialProfile P>
double residual_standard_fd(P const& profile, GridPoint const& pt, ModelSpec const& spec, ModuleLaw law, double p,
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
  return standard_residual_from(psi, dpsi, f, p);
}

/// Picks the sign of the spin-connection term in nabla psi by comparing
/// the standard-form residual of the exact p = 1 solution at one point.
struct SpinSignCalibration {
  int sign = 0;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
};

inline SpinSignCalibration calibrate_spin_connection_sign(double m = 1.0) {
  ModelSpec const spec = ModelSpec::njl(m);
  GridPoint const pt(0.8 / m, pi / 3);
  PolarFields const f = exact_fields(pt, spec, ModuleLaw::Njl);
  SpinSignCalibration out;
  out.residual_plus = residual_standard(f, 1.0, +1);
  out.residual_minus = residual_standard(f, 1.0, -1);
  out.sign = out.residual_plus <= out.residual_minus ? +1 : -1;
  return out;
}

// ---------------------------------------------------------------------------
// Reduced (zeta-substituted) system

/// zeta with its partials, for X = sinh zeta.
struct ZetaSample {
  double zeta = 0.0;
  double r_dr = 0.0;
  double dtheta = 0.0;
};

/// Inputs of the reduced system at one point.
struct ReducedFields {
  GridPoint pt{1.0, pi / 2};
  ModelSpec spec{};
  ZetaSample zeta{};
  double phi2 = 0.0;
  double r_dr_ln_phi2 = 0.0;
  double dtheta_ln_phi2 = 0.0;
};

/// Reduced inputs for a (possibly angle-dependent) zeta field with the
/// interpolating module law phi^2 = 2 sqrt(S^2 + c^2) / (r (S^2 + p c^2)),
/// S = sinh zeta. ZetaField: (r, theta) -> ZetaSample.
template <class ZetaField>
ReducedFields reduced_fields(ZetaField&& zeta_field, GridPoint const& pt, ModelSpec const& spec) {
  ZetaSample const z = zeta_field(pt.r(), pt.theta());
  double const r = pt.r();
  double const c = cos_theta(pt.theta());
  double const s = std::sin(pt.theta());
  double const S = std::sinh(z.zeta);
  double const Ch = std::cosh(z.zeta);
  double const d2 = S * S + c * c;
  double const q = S * S + spec.p * c * c;
  if (!(q > 0.0) || !(d2 > 0.0)) throw SingularPoint("reduced_fields: on the singular locus");
  ReducedFields f;
  f.pt = pt;
  f.spec = spec;
  f.zeta = z;
  f.phi2 = 2.0 * std::sqrt(d2) / (r * q);
  double const SCr = S * Ch * z.r_dr;
  double const SCt = S * Ch * z.dtheta;
  f.r_dr_ln_phi2 = SCr / d2 - 1.0 - 2.0 * SCr / q;
  f.dtheta_ln_phi2 = (SCt - c * s) / d2 - 2.0 * (SCt - spec.p * c * s) / q;
  return f;
}

/// zeta = ln 2mr.
inline ZetaSample exact_zeta(double r, double /*theta*/, double m) { return {std::log(2.0 * m * r), 1.0, 0.0}; }

/// Reduced inputs taken from already-assembled polar fields (radial X).
inline ReducedFields reduced_fields(PolarFields const& f) {
  ReducedFields out;
  out.pt = f.pt;
  out.spec = f.spec;
  out.zeta = {std::asinh(f.X), f.pt.r() * f.dX / std::sqrt(f.X * f.X + 1.0), 0.0};
  out.phi2 = f.phi2;
  out.r_dr_ln_phi2 = f.pt.r() * f.dr_ln_phi2;
  out.dtheta_ln_phi2 = f.dtheta_ln_phi2;
  return out;
}

/// Signed residuals (left minus right) of the four reduced equations plus
/// the consistency scalar eq4 - eq3 = d_th zeta (coth zeta cot th +
/// tanh zeta tan th), whose vanishing forces d_th zeta = 0.
struct ReducedEquations {
  double module_radial = 0.0;
  double module_angular = 0.0;
  double zeta_radial = 0.0;
  double zeta_angular = 0.0;
  double consistency = 0.0;
};

inline ReducedEquations reduced_equations(ReducedFields const& f, double p) {
  double const r = f.pt.r();
  double const th = f.pt.theta();
  double const c = cos_theta(th);
  double const s = std::sin(th);
  double const m = f.spec.m;
  double const S = std::sinh(f.zeta.zeta);
  double const Ch = std::cosh(f.zeta.zeta);
  double const q = S * S + c * c;
  double const q32 = q * std::sqrt(q);
  double const zr = f.zeta.r_dr;
  double const zt = f.zeta.dtheta;

  double const rhs1 = (p - 1.0) * r * f.phi2 * S * Ch * c * c / q32 - 2.0 +
                      (2.0 * m * r * Ch * c * c + 2.0 * m * r * s * s * S - zt * s * c - 2.0 * S * Ch) / q;
  double const rhs2 = (p - 1.0) * r * f.phi2 * s * c * S * S / q32 +
                      (zr - 2.0 * m * r * Ch + 2.0 * m * r * S + 1.0) * s * c / q;
  double const source = (p * c * c + S * S) * r * f.phi2 / std::sqrt(q) + 2.0 * m * r * Ch - 2.0 * m * r * S - 2.0;
  double const tilt3 = zt == 0.0 ? 0.0 : zt * std::tanh(f.zeta.zeta) * std::tan(th);
  double const tilt4 = zt == 0.0 ? 0.0 : zt / (std::tanh(f.zeta.zeta) * std::tan(th));

  ReducedEquations out;
  out.module_radial = f.r_dr_ln_phi2 - rhs1;
  out.module_angular = f.dtheta_ln_phi2 - rhs2;
  out.zeta_radial = zr - source - tilt3;
  out.zeta_angular = tilt4 - source + zr;
  out.consistency = out.zeta_angular - out.zeta_radial;
  return out;
}

inline ResidualVector residual_reduced(ReducedFields const& f, double p, SingularMask const& mask = {}) {
  ReducedEquations const e = reduced_equations(f, p);
  ResidualVector out;
  out.pt = f.pt;
  ModelSpec spec = f.spec;
  spec.p = p;
  out.masked = mask.masked(f.pt, spec);
  out.residuals = {{"module_radial", std::abs(e.module_radial)},
                   {"module_angular", std::abs(e.module_angular)},
                   {"zeta_radial", std::abs(e.zeta_radial)},
                   {"zeta_angular", std::abs(e.zeta_angular)},
                   {"consistency", std::abs(e.consistency)}};
  return out;
}

} // namespace nld

#endif // NLD_EQUATIONS_HPP
