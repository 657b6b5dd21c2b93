#include "issv/lyapunov.hpp"

#include <cmath>

#include "check_util.hpp"
#include "issv/errors.hpp"

namespace issv {

namespace {

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorKind::Domain, "tau must be > 0");
}

template <class F>
double trapezoid_nodes(const GridFunction1D& w, F&& f) {
  const std::size_t n = w.size();
  double acc = 0.5 * (f(0) + f(n - 1));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += f(i);
  return acc * w.h();
}

}  // namespace

double rho(double tau, double s) {
  require_tau(tau);
  const double a = std::abs(s);
  if (a >= tau) return a;
  const double s2 = s * s;
  return -s2 * s2 / (8.0 * tau * tau * tau) + 3.0 * s2 / (4.0 * tau) + 3.0 * tau / 8.0;
}

double rho_prime(double tau, double s) {
  require_tau(tau);
  if (std::abs(s) >= tau) return s > 0 ? 1.0 : -1.0;
  return -s * s * s / (2.0 * tau * tau * tau) + 3.0 * s / (2.0 * tau);
}

double rho_second(double tau, double s) {
  require_tau(tau);
  if (std::abs(s) >= tau) return 0.0;
  return -3.0 * s * s / (2.0 * tau * tau * tau) + 3.0 / (2.0 * tau);
}

CheckReport check_rho_properties(double tau, std::size_t n_samples, std::uint64_t seed) {
  require_tau(tau);
  if (n_samples < 1) fail(ErrorKind::Domain, "check_rho_properties: n_samples must be >= 1");
  constexpr double kTol = 1e-12;
  detail::Recorder r;
  r.report.suite = "rho";
  auto& above_abs = r.add("abs_le_rho", kTol, false);
  auto& slope = r.add("abs_rho_prime_le_1", kTol, false);
  auto& convex = r.add("rho_second_nonneg", kTol, false);
  auto& c0 = r.add("rho_minus_shift_nonneg", kTol, false);
  auto& c1 = r.add("rho_minus_shift_le_rho_prime_s", kTol, false);
  auto& c2 = r.add("rho_prime_s_le_rho", kTol, false);
  auto& c3 = r.add("rho_le_abs_plus_shift", kTol, false);
  auto& sym = r.add("symmetry", kTol, false);
  auto& seam = r.add("seam_c2", kTol, false);

  const double shift = 3.0 * tau / 8.0;
  detail::Rng rng(seed);
  for (std::size_t n = 0; n < n_samples; ++n) {
    // Mostly inside the quartic region, some far outside.
    double s = n == 0 ? 0.0 : (n == 1 ? tau : (rng.uniform() < 0.7 ? rng.uniform(-2 * tau, 2 * tau) : rng.uniform(-1e3 * tau, 1e3 * tau)));
    const double scale = std::abs(s) + tau;
    const double v = rho(tau, s);
    const double d1 = rho_prime(tau, s);
    const double d2 = rho_second(tau, s);
    detail::Recorder::record_scaled(above_abs, std::abs(s), v, scale);
    detail::Recorder::record_scaled(slope, std::abs(d1), 1.0, 1.0);
    detail::Recorder::record_scaled(convex, 0.0, d2, 1.0 / tau);
    detail::Recorder::record_scaled(c0, 0.0, v - shift, scale);
    detail::Recorder::record_scaled(c1, v - shift, d1 * s, scale);
    detail::Recorder::record_scaled(c2, d1 * s, v, scale);
    detail::Recorder::record_scaled(c3, v, std::abs(s) + shift, scale);
    const double asym = std::abs(rho(tau, -s) - v) / scale + std::abs(rho_prime(tau, -s) + d1) +
                        std::abs(rho_second(tau, -s) - d2) * tau;
    detail::Recorder::record_scaled(sym, asym, 0.0, 1.0);
  }
  // One-sided limits at |s| = tau against the outer-branch seam values.
  for (double sign : {-1.0, 1.0}) {
    const double in = sign * std::nextafter(tau, 0.0);
    const double on = sign * tau;
    const double gap = std::abs(rho(tau, in) - rho(tau, on)) / tau + std::abs(rho_prime(tau, in) - rho_prime(tau, on)) +
                       std::abs(rho_second(tau, in) - rho_second(tau, on)) * tau;
    detail::Recorder::record_scaled(seam, gap, 0.0, 1.0);
  }
  return r.report;
}

double v_tau(const GridFunction1D& w, double tau) {
  require_tau(tau);
  return trapezoid_nodes(w, [&](std::size_t i) { return rho(tau, w[i]); });
}

double v_tau_weighted(const GridFunction1D& p, const GridFunction1D& w, double tau) {
  require_tau(tau);
  if (!p.same_grid(w)) fail(ErrorKind::Shape, "weight and state live on different grids");
  for (double v : p.values())
    if (v < 0.0) fail(ErrorKind::Domain, "weight has a negative entry");
  return trapezoid_nodes(w, [&](std::size_t i) { return p[i] * rho(tau, w[i]); });
}

double v_tau_phi(const YoungFunction& y, const GridFunction1D& w, double tau) {
  require_tau(tau);
  return trapezoid_nodes(w, [&](std::size_t i) { return y.big_phi(rho(tau, w[i])); });
}

double v_tau_phi_weighted(const YoungFunction& y, const GridFunction1D& p, const GridFunction1D& w, double tau) {
  require_tau(tau);
  if (!p.same_grid(w)) fail(ErrorKind::Shape, "weight and state live on different grids");
  for (double v : p.values())
    if (v < 0.0) fail(ErrorKind::Domain, "weight has a negative entry");
  return trapezoid_nodes(w, [&](std::size_t i) { return p[i] * y.big_phi(rho(tau, w[i])); });
}

}  // namespace issv
