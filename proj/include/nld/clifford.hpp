#ifndef NLD_CLIFFORD_HPP
#define NLD_CLIFFORD_HPP

// Clifford algebra in the chiral (Weyl) representation.
//
//   gamma^0 = [[0, I], [I, 0]]      gamma^k = [[0, sigma_k], [-sigma_k, 0]]
//   pi      = diag(-1, -1, 1, 1)
//
// with eta = diag(1, -1, -1, -1) and eps_0123 = +1. The parity-odd matrix pi
// is not chosen freely: it is the unique matrix with 2i sigma_ab =
// eps_abcd pi sigma^cd, and chiral_pi() derives it from that relation. In this
// basis the rest-frame column (1, 0, 1, 0) has Phi = 2, Theta = 0, velocity
// U = (2, 0, 0, 0) and spin S = (0, 0, 0, 2).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace nld {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::Matrix4cd;
using Spinor = Eigen::Vector4cd;

inline constexpr std::array<double, 4> eta_diag{1.0, -1.0, -1.0, -1.0};

inline double eta(int a, int b) { return a == b ? eta_diag[a] : 0.0; }

/// Totally antisymmetric symbol with eps[0][1][2][3] = +1.
inline int levi_civita(int a, int b, int c, int d) {
  std::array<int, 4> idx{a, b, c, d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (idx[i] == idx[j]) return 0;
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (idx[i] > idx[j]) sign = -sign;
  return sign;
}

namespace detail {

inline void check_index(int a) {
  if (a < 0 || a > 3) throw std::out_of_range("flat Lorentz index must be in 0..3");
}

inline ComplexMatrix block(Eigen::Matrix2cd const& ul, Eigen::Matrix2cd const& ur,
                           Eigen::Matrix2cd const& ll, Eigen::Matrix2cd const& lr) {
  ComplexMatrix out;
  out << ul, ur, ll, lr;
  return out;
}

inline std::array<Eigen::Matrix2cd, 3> pauli() {
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  return {sx, sy, sz};
}

inline std::array<ComplexMatrix, 4> make_gamma_upper() {
  Eigen::Matrix2cd const id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd const zero = Eigen::Matrix2cd::Zero();
  auto const s = pauli();
  return {block(zero, id, id, zero), block(zero, s[0], -s[0], zero),
          block(zero, s[1], -s[1], zero), block(zero, s[2], -s[2], zero)};
}

} // namespace detail

/// gamma^a, flat index up.
inline ComplexMatrix const& gamma_upper(int a) {
  static auto const table = detail::make_gamma_upper();
  detail::check_index(a);
  return table[a];
}

/// gamma_a = eta_ab gamma^b.
inline ComplexMatrix gamma_lower(int a) { return eta_diag.at(a) * gamma_upper(a); }

/// sigma_ab = [gamma_a, gamma_b] / 4.
inline ComplexMatrix sigma(int a, int b) {
  detail::check_index(a);
  detail::check_index(b);
  ComplexMatrix const ga = gamma_lower(a);
  ComplexMatrix const gb = gamma_lower(b);
  return (ga * gb - gb * ga) / 4.0;
}

/// sigma^ab with both indices raised.
inline ComplexMatrix sigma_upper(int a, int b) { return eta_diag.at(a) * eta_diag.at(b) * sigma(a, b); }

namespace detail {

inline ComplexMatrix make_pi() {
  // Contract the defining relation at (a, b) = (0, 1): 2i sigma_01 = 2 pi sigma^23.
  ComplexMatrix const p = cplx(0, 1) * sigma(0, 1) * sigma_upper(2, 3).inverse();
  // Entries are exactly 0 or +-1; strip the rounding of the inverse.
  return p.unaryExpr([](cplx z) { return cplx(std::round(z.real()), std::round(z.imag())); });
}

} // namespace detail

/// The parity-odd matrix fixed by 2i sigma_ab = eps_abcd pi sigma^cd.
inline ComplexMatrix const& chiral_pi() {
  static ComplexMatrix const p = detail::make_pi();
  return p;
}

/// {A, B} = AB + BA.
inline ComplexMatrix anticommutator(ComplexMatrix const& a, ComplexMatrix const& b) { return a * b + b * a; }

inline ComplexMatrix commutator(ComplexMatrix const& a, ComplexMatrix const& b) { return a * b - b * a; }

/// gamma^0..gamma^3, pi, identity.
struct GammaBasis {
  std::array<ComplexMatrix, 4> gamma;
  ComplexMatrix pi;
  ComplexMatrix identity;
};

inline GammaBasis gamma_basis() {
  return {{gamma_upper(0), gamma_upper(1), gamma_upper(2), gamma_upper(3)}, chiral_pi(),
          ComplexMatrix::Identity()};
}

/// Dirac adjoint as a row: psi^dagger gamma^0.
inline Eigen::RowVector4cd adjoint(Spinor const& psi) { return psi.adjoint() * gamma_upper(0); }

/// Real bilinear covariants of a spinor, flat indices up.
struct BilinearSet {
  double theta = 0.0; // i psibar pi psi
  double phi = 0.0;   // psibar psi
  std::array<double, 4> S{}; // psibar gamma^a pi psi
  std::array<double, 4> U{}; // psibar gamma^a psi
};

/// Minkowski product v_a w^a for flat-index-up vectors.
inline double minkowski(std::array<double, 4> const& v, std::array<double, 4> const& w) {
  return v[0] * w[0] - v[1] * w[1] - v[2] * w[2] - v[3] * w[3];
}

inline constexpr double kBilinearImagTolerance = 1e-10;

/// Theta, Phi, S^a, U^a of psi. Throws NonRealBilinear when an imaginary part
/// exceeds 1e-10 relative to |psi|^2.
inline BilinearSet bilinears(Spinor const& psi) {
  if (!psi.allFinite()) throw std::invalid_argument("bilinears: spinor has non-finite entries");
  Eigen::RowVector4cd const bar = adjoint(psi);
  double const scale = std::max(1.0, psi.squaredNorm());

  auto take_real = [scale](cplx z, char const* name) {
    if (std::abs(z.imag()) > kBilinearImagTolerance * scale)
      throw NonRealBilinear(std::string("bilinear ") + name + " has imaginary part " +
                            std::to_string(z.imag()));
    return z.real();
  };

  BilinearSet out;
  ComplexMatrix const& p = chiral_pi();
  out.theta = take_real(cplx(0, 1) * (bar * p * psi)(0), "Theta");
  out.phi = take_real((bar * psi)(0), "Phi");
  for (int a = 0; a < 4; ++a) {
    out.S[a] = take_real((bar * gamma_upper(a) * p * psi)(0), "S");
    out.U[a] = take_real((bar * gamma_upper(a) * psi)(0), "U");
  }
  return out;
}

/// Relative deviations from the Fierz identities U.U = -S.S = Theta^2 + Phi^2
/// and U.S = 0. The scale is (U^0)^2 = (psi^dagger psi)^2, which bounds every
/// term in the identities; a null spinor uses scale 1.
struct FierzDefects {
  double uu = 0.0;
  double ss = 0.0;
  double us = 0.0;

  double max() const { return std::max({uu, ss, us}); }
};

inline FierzDefects fierz_defects(BilinearSet const& b) {
  double const norm2 = b.theta * b.theta + b.phi * b.phi;
  double const scale = b.U[0] > 0.0 ? b.U[0] * b.U[0] : 1.0;
  return {std::abs(minkowski(b.U, b.U) - norm2) / scale, std::abs(minkowski(b.S, b.S) + norm2) / scale,
          std::abs(minkowski(b.U, b.S)) / scale};
}

} // namespace nld

#endif // NLD_CLIFFORD_HPP
