#ifndef NLD_TYPES_HPP
#define NLD_TYPES_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nld {

inline constexpr double pi = std::numbers::pi;

/// cos(theta) with the rounding residue at theta = pi/2 (about 6e-17)
/// flushed to zero, so the equatorial plane is hit exactly.
inline double cos_theta(double theta) {
  double const c = std::cos(theta);
  return std::abs(c) < 4.0 * std::numeric_limits<double>::epsilon() ? 0.0 : c;
}

// Coordinate index order used throughout: t, r, theta, phi.
enum Coord : int { kT = 0, kR = 1, kTheta = 2, kPhi = 3 };

/// Spatial point of the spherical background. The azimuth and time enter only
/// through phases, so they are carried separately where needed.
class GridPoint {
public:
  GridPoint(double r, double theta) : r_(r), theta_(theta) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("GridPoint: r must be positive and finite");
    if (!(theta >= 0.0 && theta <= pi))
      throw std::invalid_argument("GridPoint: theta must lie in [0, pi]");
  }

  double r() const noexcept { return r_; }
  double theta() const noexcept { return theta_; }

  /// True away from the polar axis, where 1/sin(theta) and cot(theta) exist.
  bool off_axis() const noexcept { return std::sin(theta_) > 0.0 && theta_ > 0.0 && theta_ < pi; }

  void require_off_axis(char const* who) const {
    if (!off_axis())
      throw std::invalid_argument(std::string(who) + ": point lies on the polar axis");
  }

private:
  double r_;
  double theta_;
};

/// Parameters of a solution family: mass, interpolation parameter p
/// (p = 1 Nambu-Jona-Lasinio, p = 0 Soler), energy and angular momentum.
struct ModelSpec {
  double m = 1.0;
  double p = 1.0;
  double E = 1.0;
  double l = 0.5;

  static ModelSpec njl(double m = 1.0) { return {m, 1.0, m, 0.5}; }
  static ModelSpec soler(double m = 1.0) { return {m, 0.0, m, 0.5}; }
  static ModelSpec interpolating(double p, double m = 1.0) { return {m, p, m, 0.5}; }

  void validate() const {
    if (!(m > 0.0) || !std::isfinite(m))
      throw std::invalid_argument("ModelSpec: mass must be positive");
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("ModelSpec: p must lie in [0, 1]");
    if (!std::isfinite(E) || !std::isfinite(l))
      throw std::invalid_argument("ModelSpec: E and l must be finite");
  }
};

/// The two models whose polar-form equations are written out explicitly.
enum class Model { NJL, Soler };

inline char const* to_string(Model model) {
  return model == Model::NJL ? "njl" : "soler";
}

} // namespace nld

#endif // NLD_TYPES_HPP
