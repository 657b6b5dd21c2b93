#include "issv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "issv/errors.hpp"

namespace issv {

namespace {

constexpr double kLuxRelWidth = 1e-12;

void require_same_grid(const GridFunction1D& a, const GridFunction1D& b) {
  if (!a.same_grid(b)) fail(ErrorKind::Shape, "grid functions live on different grids");
}

template <class F>
double trapezoid_of(const GridFunction1D& w, F&& f) {
  const auto& v = w.values();
  const std::size_t n = v.size();
  double acc = 0.5 * (f(0, v[0]) + f(n - 1, v[n - 1]));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += f(i, v[i]);
  return acc * w.h();
}

template <class F>
double time_trapezoid_of(const TimeSeries& g, std::size_t upto, F&& f) {
  const auto& t = g.times();
  const auto& v = g.values();
  double acc = 0.0;
  for (std::size_t k = 1; k <= upto; ++k) acc += 0.5 * (t[k] - t[k - 1]) * (f(v[k - 1]) + f(v[k]));
  return acc;
}

// Smallest k with modular(k) <= 1, where modular is decreasing in k and
// `mod0` is the modular at k = 1.
template <class Modular>
double luxemburg_bisect(const YoungFunction& y, double mod0, Modular&& modular) {
  if (mod0 == 0.0) return 0.0;
  auto [lo, hi] = luxemburg_sandwich(y, mod0);
  // Numeric exponents are only calibrated on [1e-6, s_max], so confirm the bracket.
  while (modular(hi) > 1.0) hi *= 2.0;
  while (lo > 0.0 && modular(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
  }
  for (int it = 0; it < 400 && hi - lo > kLuxRelWidth * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (modular(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

GridFunction1D::GridFunction1D(double x_lo, double x_hi, std::vector<double> values)
    : x_lo_(x_lo), x_hi_(x_hi), values_(std::move(values)) {
  if (!(x_lo_ < x_hi_)) fail(ErrorKind::Domain, "grid function needs x_lo < x_hi");
  if (values_.size() < 2) fail(ErrorKind::Domain, "grid function needs at least 2 nodes");
  for (double v : values_)
    if (!std::isfinite(v)) fail(ErrorKind::Domain, "grid function has a non-finite value");
}

GridFunction1D GridFunction1D::map(const std::function<double(double, double)>& f) const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(x(i), values_[i]);
  return GridFunction1D(x_lo_, x_hi_, std::move(out));
}

GridFunction1D GridFunction1D::scaled(double k) const {
  return map([k](double, double v) { return k * v; });
}

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size()) fail(ErrorKind::Shape, "time series: times and values differ in length");
  for (std::size_t i = 0; i < times.size(); ++i) append(times[i], values[i]);
}

void TimeSeries::append(double t, double value) {
  if (times_.empty() && t != 0.0) fail(ErrorKind::Domain, "time series must start at t = 0");
  if (!times_.empty() && !(t > times_.back())) fail(ErrorKind::Domain, "time series times must be strictly increasing");
  if (!std::isfinite(value)) fail(ErrorKind::Domain, "time series value is not finite");
  times_.push_back(t);
  values_.push_back(value);
}

TimeSeries TimeSeries::map(const std::function<double(double, double)>& f) const {
  TimeSeries out;
  for (std::size_t k = 0; k < size(); ++k) out.append(times_[k], f(times_[k], values_[k]));
  return out;
}

void TimeSeries::write_csv(std::ostream& os) const {
  os << "t,value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < size(); ++k) os << times_[k] << ',' << values_[k] << '\n';
}

TimeSeries TimeSeries::read_csv(std::istream& is) {
  TimeSeries out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (lineno == 1 && !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' || line[0] == '.')) continue;
    std::istringstream row(line);
    double t = 0.0;
    double v = 0.0;
    char comma = 0;
    if (!(row >> t >> comma >> v) || comma != ',') fail(ErrorKind::Parse, "time series csv: bad row " + std::to_string(lineno));
    out.append(t, v);
  }
  return out;
}

double trapezoid_integral(const GridFunction1D& w) {
  return trapezoid_of(w, [](std::size_t, double v) { return v; });
}

double l1_norm(const GridFunction1D& w) {
  return trapezoid_of(w, [](std::size_t, double v) { return std::abs(v); });
}

double weighted_l1_norm(const GridFunction1D& p, const GridFunction1D& w) {
  require_same_grid(p, w);
  for (double v : p.values())
    if (v < 0.0) fail(ErrorKind::Domain, "weight has a negative entry");
  return trapezoid_of(w, [&](std::size_t i, double v) { return p[i] * std::abs(v); });
}

double sup_norm(const GridFunction1D& w) {
  double m = 0.0;
  for (double v : w.values()) m = std::max(m, std::abs(v));
  return m;
}

double orlicz_modular(const YoungFunction& y, const GridFunction1D& w) {
  return trapezoid_of(w, [&](std::size_t, double v) { return y.big_phi(std::abs(v)); });
}

double weighted_orlicz_modular(const YoungFunction& y, const GridFunction1D& p, const GridFunction1D& w) {
  require_same_grid(p, w);
  return trapezoid_of(w, [&](std::size_t i, double v) { return p[i] * y.big_phi(std::abs(v)); });
}

std::pair<double, double> luxemburg_sandwich(const YoungFunction& y, double modular) {
  const double d0 = y.delta0();
  const double d1 = y.delta1();
  const double down = (1.0 + d0) / (1.0 + d1) * modular;
  const double up = (1.0 + d1) / (1.0 + d0) * modular;
  const double lower = std::min(std::pow(down, 1.0 / (1.0 + d0)), std::pow(down, 1.0 / (1.0 + d1)));
  const double upper = std::max(std::pow(up, 1.0 / (1.0 + d0)), std::pow(up, 1.0 / (1.0 + d1)));
  return {lower, upper};
}

double luxemburg_norm(const YoungFunction& y, const GridFunction1D& w) {
  const double m0 = orlicz_modular(y, w);
  return luxemburg_bisect(y, m0, [&](double k) {
    return trapezoid_of(w, [&](std::size_t, double v) { return y.big_phi(std::abs(v) / k); });
  });
}

double time_integral(const TimeSeries& g) {
  if (g.empty()) return 0.0;
  return time_trapezoid_of(g, g.size() - 1, [](double v) { return v; });
}

double time_lq_norm(const TimeSeries& g, double q) {
  const auto all = time_lq_norm_prefix(g, q);
  return all.empty() ? 0.0 : all.back();
}

std::vector<double> time_lq_norm_prefix(const TimeSeries& g, double q) {
  if (!(q >= 1.0)) fail(ErrorKind::Domain, "time_lq_norm: q must be >= 1");
  std::vector<double> out(g.size());
  const auto& t = g.times();
  const auto& v = g.values();
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = m = std::max(m, std::abs(v[k]));
    return out;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k > 0) acc += 0.5 * (t[k] - t[k - 1]) * (std::pow(std::abs(v[k - 1]), q) + std::pow(std::abs(v[k]), q));
    out[k] = std::pow(acc, 1.0 / q);
  }
  return out;
}

double time_orlicz_modular(const YoungFunction& y, const TimeSeries& g) {
  if (g.empty()) return 0.0;
  return time_trapezoid_of(g, g.size() - 1, [&](double v) { return y.big_phi(std::abs(v)); });
}

double time_luxemburg_norm(const YoungFunction& y, const TimeSeries& g) {
  const auto all = time_luxemburg_norm_prefix(y, g);
  return all.empty() ? 0.0 : all.back();
}

std::vector<double> time_luxemburg_norm_prefix(const YoungFunction& y, const TimeSeries& g) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = 1; k < g.size(); ++k) {
    const double m0 = time_trapezoid_of(g, k, [&](double v) { return y.big_phi(std::abs(v)); });
    out[k] = luxemburg_bisect(y, m0, [&](double s) {
      return time_trapezoid_of(g, k, [&](double v) { return y.big_phi(std::abs(v) / s); });
    });
  }
  return out;
}

double holder_orlicz_check(const YoungFunction& y, const GridFunction1D& u, const GridFunction1D& v) {
  require_same_grid(u, v);
  const double integral = trapezoid_of(u, [&](std::size_t i, double ui) { return ui * v[i]; });
  return 2.0 * luxemburg_norm(y, u) * luxemburg_norm(y.conjugate(), v) - std::abs(integral);
}

std::pair<double, double> luxemburg_sandwich_check(const YoungFunction& y, const GridFunction1D& u) {
  const double m = orlicz_modular(y, u);
  const double norm = luxemburg_norm(y, u);
  const auto [lower, upper] = luxemburg_sandwich(y, m);
  return {norm - lower, upper - norm};
}

}  // namespace issv
