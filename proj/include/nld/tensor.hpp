#ifndef NLD_TENSOR_HPP
#define NLD_TENSOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace nld {

/// Dense rank-N array over four-valued indices, stored row-major. Index
/// placement (up/down, flat/coordinate) is a property of the quantity, not of
/// the container, and is documented where each tensor is produced.
template <int Rank>
class Tensor {
  static_assert(Rank >= 1 && Rank <= 4);

public:
  static constexpr std::size_t size = std::size_t{1} << (2 * Rank);

  Tensor() { data_.fill(0.0); }

  template <class... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(idx...)];
  }

  template <class... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(idx...)];
  }

  std::array<double, size> const& data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  Tensor& operator+=(Tensor const& o) {
    for (std::size_t i = 0; i < size; ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor& operator-=(Tensor const& o) {
    for (std::size_t i = 0; i < size; ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Tensor operator+(Tensor a, Tensor const& b) { return a += b; }
  friend Tensor operator-(Tensor a, Tensor const& b) { return a -= b; }
  friend Tensor operator*(Tensor a, double s) { return a *= s; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

private:
  template <class... I>
  static std::size_t offset(I... idx) {
    std::size_t off = 0;
    ((off = off * 4 + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  std::array<double, size> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

} // namespace nld

#endif // NLD_TENSOR_HPP
