#ifndef NLD_GRID_HPP
#define NLD_GRID_HPP

// Sampling grids, seeded random points, concurrent sweeps and summary
// statistics of residuals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <vector>

#include "types.hpp"

namespace nld {

inline std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linear_grid: need at least two nodes");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return out;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
  std::vector<double> out = linear_grid(std::log(lo), std::log(hi), n);
  for (double& v : out) v = std::exp(v);
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Uniform polar angles on [margin, pi - margin].
inline std::vector<double> theta_grid(int n, double margin = 1e-3) {
  if (!(margin > 0.0) || !(margin < pi / 2)) throw std::invalid_argument("theta_grid: margin must lie in (0, pi/2)");
  return linear_grid(margin, pi - margin, n);
}

/// Log-spaced radii (units of 1/m) times uniform angles, r-major.
struct FieldGrid {
  double r_min = 1e-2;
  double r_max = 1e2;
  int n_r = 200;
  int n_theta = 100;
  double theta_margin = 1e-3;

  void validate() const {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("grid: need 0 < r_min < r_max");
    if (n_r < 2 || n_theta < 2) throw std::invalid_argument("grid: n_r and n_theta must be at least 2");
  }

  std::vector<GridPoint> points(double m = 1.0) const {
    validate();
    std::vector<GridPoint> out;
    out.reserve(static_cast<std::size_t>(n_r) * n_theta);
    auto const th = theta_grid(n_theta, theta_margin);
    for (double r : log_grid(r_min / m, r_max / m, n_r))
      for (double t : th) out.emplace_back(r, t);
    return out;
  }
};

/// n points with log-uniform r in [r_min, r_max] and uniform theta in
/// [margin, pi - margin], from a 64-bit Mersenne twister seeded with seed.
inline std::vector<GridPoint> random_points(std::size_t n, std::uint64_t seed, double r_min = 0.05,
                                            double r_max = 20.0, double margin = 1e-2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GridPoint> out;
  out.reserve(n);
  double const a = std::log(r_min);
  double const b = std::log(r_max);
  while (out.size() < n) {
    double const r = std::exp(a + (b - a) * u(rng));
    double const t = margin + (pi - 2.0 * margin) * u(rng);
    out.emplace_back(r, t);
  }
  return out;
}

/// f applied to every item on up to `threads` workers; results keep the
/// input order. Exceptions from any worker are rethrown.
template <class T, class F>
auto parallel_map(std::vector<T> const& items, F&& f, unsigned threads = 0) {
  using R = decltype(f(items.front()));
  static_assert(!std::is_same_v<R, bool>, "parallel_map: vector<bool> is not thread-safe per element");
  std::vector<R> out(items.size());
  if (items.empty()) return out;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(items.size()));
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  std::size_t const chunk = (items.size() + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        std::size_t const end = std::min(items.size(), (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) out[i] = f(items[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Max, mean and quantiles of the unmasked values.
struct ResidualStats {
  std::size_t count = 0;
  std::size_t masked = 0;
  double max = 0.0;
  double mean = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

inline ResidualStats residual_stats(std::vector<double> values, std::size_t masked = 0) {
  ResidualStats s;
  s.masked = masked;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.max = values.back();
  s.mean = sum / static_cast<double>(values.size());
  auto q = [&](double p) {
    std::size_t const idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size()))) - 1;
    return values[std::min(idx, values.size() - 1)];
  };
  s.q50 = q(0.5);
  s.q90 = q(0.9);
  s.q99 = q(0.99);
  return s;
}

} // namespace nld

#endif // NLD_GRID_HPP
