#ifndef NLD_ERRORS_HPP
#define NLD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nld {

/// A bilinear that must be real came out with a sizeable imaginary part.
class NonRealBilinear : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Evaluation requested on (or numerically at) a singular locus of the fields.
class SingularPoint : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The Soler companion field G = 2 / (r X^2) diverges where X = 0 (2mr = 1).
class SingularG : public SingularPoint {
public:
  using SingularPoint::SingularPoint;
};

/// Richardson estimate says the central difference has not converged.
class StepTooLarge : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DivergingState : public std::runtime_error {
public:
  DivergingState(std::string const& what, double last_good_r)
      : std::runtime_error(what), last_good_r_(last_good_r) {}
  double last_good_r() const noexcept { return last_good_r_; }

private:
  double last_good_r_;
};

class StepUnderflow : public std::runtime_error {
public:
  StepUnderflow(std::string const& what, double r)
      : std::runtime_error(what), r_(r) {}
  double r() const noexcept { return r_; }

private:
  double r_;
};

/// An ODE span contains the singular radius 2mr = 1 (split rule).
class SpanCrossesSingularRadius : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class GridTooCoarse : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace nld

#endif // NLD_ERRORS_HPP
