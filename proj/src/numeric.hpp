#pragma once

// Internal numeric helpers shared by the library sources.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace issv::detail {

/// splitmix64: portable, so sampled checks are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

 private:
  std::uint64_t state_;
};

inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::exp(a + f * (b - a));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace simpson_impl {
template <class F>
double recurse(const F& f, double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}
}  // namespace simpson_impl

/// Adaptive composite Simpson with Richardson correction. The absolute
/// tolerance is rel_tol times a coarse estimate of the integral.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol = 1e-10, int max_depth = 30) {
  if (b == a) return 0.0;
  // Start from four panels so an integrand vanishing at the midpoint is not mistaken for zero.
  constexpr int kPanels = 4;
  double total = 0.0;
  double coarse = 0.0;
  std::vector<double> fx(2 * kPanels + 1);
  const double h = (b - a) / (2 * kPanels);
  for (int i = 0; i <= 2 * kPanels; ++i) fx[i] = f(a + h * i);
  for (int p = 0; p < kPanels; ++p) coarse += std::abs(h / 3.0 * (fx[2 * p] + 4.0 * fx[2 * p + 1] + fx[2 * p + 2]));
  const double eps = std::max(rel_tol * coarse, std::numeric_limits<double>::min());
  for (int p = 0; p < kPanels; ++p) {
    const double pa = a + 2 * p * h;
    const double pb = pa + 2 * h;
    const double whole = h / 3.0 * (fx[2 * p] + 4.0 * fx[2 * p + 1] + fx[2 * p + 2]);
    total += simpson_impl::recurse(f, pa, pb, fx[2 * p], fx[2 * p + 1], fx[2 * p + 2], whole, eps / kPanels, max_depth);
  }
  return total;
}

/// Relative slack of `lhs <= rhs`.
inline double rel_slack(double lhs, double rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return (rhs - lhs) / scale;
}

}  // namespace issv::detail
