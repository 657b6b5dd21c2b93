#pragma once

// Grid functions on a 1-D interval, time series, and the norms the bounds use.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "issv/young.hpp"

namespace issv {

/// Samples at n >= 2 uniformly spaced nodes of [x_lo, x_hi], endpoints included.
class GridFunction1D {
 public:
  GridFunction1D(double x_lo, double x_hi, std::vector<double> values);

  template <class F>
  static GridFunction1D sample(double x_lo, double x_hi, std::size_t n, F&& f) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(node(x_lo, x_hi, n, i));
    return GridFunction1D(x_lo, x_hi, std::move(v));
  }
  static GridFunction1D constant(double x_lo, double x_hi, std::size_t n, double value) {
    return GridFunction1D(x_lo, x_hi, std::vector<double>(n, value));
  }

  double x_lo() const noexcept { return x_lo_; }
  double x_hi() const noexcept { return x_hi_; }
  double length() const noexcept { return x_hi_ - x_lo_; }
  std::size_t size() const noexcept { return values_.size(); }
  double h() const noexcept { return (x_hi_ - x_lo_) / static_cast<double>(values_.size() - 1); }
  double x(std::size_t i) const noexcept { return node(x_lo_, x_hi_, values_.size(), i); }

  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  bool same_grid(const GridFunction1D& o) const noexcept {
    return x_lo_ == o.x_lo_ && x_hi_ == o.x_hi_ && values_.size() == o.values_.size();
  }

  /// Pointwise map onto the same grid.
  GridFunction1D map(const std::function<double(double x, double v)>& f) const;
  GridFunction1D scaled(double k) const;

  static double node(double x_lo, double x_hi, std::size_t n, std::size_t i) noexcept {
    return i + 1 == n ? x_hi : x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }

 private:
  double x_lo_;
  double x_hi_;
  std::vector<double> values_;
};

/// Traces at the two boundary points of the interval.
struct BoundaryPair {
  double left = 0.0;
  double right = 0.0;
};

/// Samples of t -> value on an increasing time grid starting at 0.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<double> times, std::vector<double> values);

  void append(double t, double value);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  /// Pointwise transform, keeping times.
  TimeSeries map(const std::function<double(double t, double v)>& f) const;

  /// Header "t,value", 17 significant digits.
  void write_csv(std::ostream& os) const;
  static TimeSeries read_csv(std::istream& is);

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

double trapezoid_integral(const GridFunction1D& w);
double l1_norm(const GridFunction1D& w);
double weighted_l1_norm(const GridFunction1D& p, const GridFunction1D& w);
double sup_norm(const GridFunction1D& w);

/// integral of Phi(|w|), resp. p Phi(|w|).
double orlicz_modular(const YoungFunction& y, const GridFunction1D& w);
double weighted_orlicz_modular(const YoungFunction& y, const GridFunction1D& p, const GridFunction1D& w);

/// inf{k > 0 : modular(w/k) <= 1}, bisected to relative width 1e-12.
double luxemburg_norm(const YoungFunction& y, const GridFunction1D& w);

double time_integral(const TimeSeries& g);
/// (int_0^T |g|^q dt)^(1/q); q = infinity gives max |g|.
double time_lq_norm(const TimeSeries& g, double q);
/// The same norm over every prefix [0, times[k]].
std::vector<double> time_lq_norm_prefix(const TimeSeries& g, double q);

double time_orlicz_modular(const YoungFunction& y, const TimeSeries& g);
double time_luxemburg_norm(const YoungFunction& y, const TimeSeries& g);
std::vector<double> time_luxemburg_norm_prefix(const YoungFunction& y, const TimeSeries& g);

/// 2 ||u||_Phi ||v||_Phi~ - |int u v|.
double holder_orlicz_check(const YoungFunction& y, const GridFunction1D& u, const GridFunction1D& v);

/// Slack of both sides of the Luxemburg-norm sandwich in terms of the modular:
/// first = norm - lower, second = upper - norm.
std::pair<double, double> luxemburg_sandwich_check(const YoungFunction& y, const GridFunction1D& u);

/// Lower and upper sandwich values for a given modular.
std::pair<double, double> luxemburg_sandwich(const YoungFunction& y, double modular);

/// Counting-measure L1 norm on the two-point boundary.
inline double boundary_l1(const BoundaryPair& d) noexcept {
  return (d.left < 0 ? -d.left : d.left) + (d.right < 0 ? -d.right : d.right);
}

}  // namespace issv
