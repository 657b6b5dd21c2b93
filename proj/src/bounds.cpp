#include "issv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "issv/errors.hpp"
#include "issv/solver.hpp"
#include "numeric.hpp"

namespace issv {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_q(double q) {
  if (!(q >= 1.0)) fail(ErrorKind::Domain, "q must lie in [1, inf]");
}

void require_aligned(const TimeSeries& a, const TimeSeries& b) {
  if (a.times() != b.times()) fail(ErrorKind::Shape, "disturbance series are sampled at different times");
  if (a.empty()) fail(ErrorKind::Shape, "disturbance series are empty");
}

// bound_k = decay(T_k) * w0 + gain * (D_k + F_k)
template <class Decay>
TimeSeries combine(const std::vector<double>& times, Decay&& decay, double w0, double gain_d, const std::vector<double>& dk,
                   double gain_f, const std::vector<double>& fk) {
  TimeSeries out;
  for (std::size_t k = 0; k < times.size(); ++k) out.append(times[k], decay(times[k]) * w0 + gain_d * dk[k] + gain_f * fk[k]);
  return out;
}

std::vector<double> prefix_lq(const TimeSeries& g, double q) { return time_lq_norm_prefix(g, q); }

std::vector<double> boundary_endpoints_x(const DirichletData& dd) { return {dd.x_lo, dd.x_hi}; }

template <class Outer>
TimeSeries dirichlet_series(const DirichletData& dd, Outer&& outer) {
  require_aligned(dd.d_left, dd.d_right);
  const auto xs = boundary_endpoints_x(dd);
  const double pp[2] = {dd.p_prime_abs.left, dd.p_prime_abs.right};
  const TimeSeries* ds[2] = {&dd.d_left, &dd.d_right};
  TimeSeries out;
  for (std::size_t k = 0; k < dd.d_left.size(); ++k) {
    const double t = dd.d_left.times()[k];
    double acc = 0.0;
    for (int e = 0; e < 2; ++e) {
      const double a = dd.a.eval_xt(xs[e], t);
      const double psi1 = dd.psi1.eval_xt(xs[e], t);
      if (!(psi1 > 0.0)) fail(ErrorKind::Domain, "psi1 must be > 0 on the boundary (A3'-2)");
      acc += a * outer(ds[e]->values()[k], psi1) * std::abs(pp[e]);
    }
    out.append(t, acc);
  }
  return out;
}

void check_eps_window(double eps, double cbar, const YoungFunction& y, double psi0_under, bool robin) {
  const double d0 = y.delta0();
  const double d1 = y.delta1();
  if (!(cbar > 0.0)) throw ConstraintError("A2-3'", "cbar must be > 0, got " + num(cbar));
  if (!(eps > 0.0)) throw ConstraintError("eps > 0", "got " + num(eps));
  if (!(eps < cbar * (1.0 + d0)))
    throw ConstraintError("eps < cbar (1+delta0)", num(eps) + " >= " + num(cbar * (1.0 + d0)) + "; lambda would be <= 0");
  if (robin && !(eps < (1.0 + d0) / d1 * psi0_under))
    throw ConstraintError("eps < ((1+delta0)/delta1) psi0", num(eps) + " >= " + num((1.0 + d0) / d1 * psi0_under));
}

KPhiBound kphi_common(double eps, double cbar, const YoungFunction& y) {
  KPhiBound r;
  r.eps = eps;
  r.lambda = cbar * (1.0 + y.delta0()) - eps;
  r.c_eps = young_eps_constant(y, eps);
  return r;
}

void fill_norm_corollary(KPhiBound& r, const YoungFunction& y) {
  for (std::size_t k = 0; k < r.modular.size(); ++k)
    r.norm.append(r.modular.times()[k], luxemburg_sandwich(y, r.modular.values()[k]).second);
}

}  // namespace

double holder_factor(double cbar, double q) {
  if (!(cbar > 0.0)) fail(ErrorKind::Domain, "holder_factor: cbar must be > 0");
  require_q(q);
  if (q == 1.0) return 1.0;
  if (std::isinf(q)) return 1.0 / cbar;
  const double qp = q / (q - 1.0);
  return std::pow(1.0 / (cbar * qp), 1.0 / qp);
}

TimeSeries thm31_l1_estimate(const BoundInputs& in, double cbar) {
  if (!(cbar >= 0.0)) fail(ErrorKind::Domain, "cbar must be >= 0");
  require_aligned(in.d_series, in.f_series);
  return combine(
      in.d_series.times(), [&](double t) { return std::exp(-cbar * t); }, in.w0_norm, 1.0, prefix_lq(in.d_series, 1.0), 1.0,
      prefix_lq(in.f_series, 1.0));
}

TimeSeries thm31_lq_iss(const BoundInputs& in, double cbar) {
  const double hf = holder_factor(cbar, in.q);
  require_aligned(in.d_series, in.f_series);
  return combine(
      in.d_series.times(), [&](double t) { return std::exp(-cbar * t); }, in.w0_norm, hf, prefix_lq(in.d_series, in.q), hf,
      prefix_lq(in.f_series, in.q));
}

double gain_k_floor(const GainParams& gp) {
  const double l = gp.l;
  if (!(l > std::max(0.0, -gp.b_under)))
    throw ConstraintError("l > max{0, -b}", "l = " + num(l) + ", b = " + num(gp.b_under));
  if (!(gp.a_under > 0.0) || !(gp.a_bar >= gp.a_under))
    throw ConstraintError("A1-1", "need 0 < a_under <= a_bar");
  const double eld = std::exp(l * gp.dd);
  double floor = 2.0 * l * eld / (l + gp.b_under);
  if (gp.dirichlet) {
    if (!(gp.p0 > 0.0)) throw ConstraintError("A3'-1", "p0 must be > 0, got " + num(gp.p0));
    floor = std::max(floor, 2.0 * gp.a_bar * l * eld * gp.p_max / gp.p0);
  } else {
    if (!(gp.psi0_under > 0.0)) throw ConstraintError("A3-2", "psi0 must be > 0, got " + num(gp.psi0_under));
    floor = std::max(floor, gp.a_bar * l * eld / gp.psi0_under);
  }
  if (gp.route == GainRoute::M) floor = std::max(floor, 2.0 * l * eld * gp.m_bar);
  return floor;
}

Gains gains(const GainParams& gp) {
  const double floor = gain_k_floor(gp);
  if (!(gp.k > floor)) {
    const double l = gp.l;
    const double eld = std::exp(l * gp.dd);
    std::string which = "k > 2 l e^{l dd}/(l + b)";
    if (gp.route == GainRoute::M && gp.k <= 2.0 * l * eld * gp.m_bar) which = "k > 2 l e^{l dd} m";
    else if (!gp.dirichlet && gp.k <= gp.a_bar * l * eld / gp.psi0_under) which = "k > a l e^{l dd}/psi0";
    else if (gp.dirichlet && gp.k <= 2.0 * gp.a_bar * l * eld * gp.p_max / gp.p0) which = "k > 2 a l e^{l dd} max|p'|/p0";
    throw ConstraintError(which, "k = " + num(gp.k) + " <= floor " + num(floor));
  }
  const double l = gp.l;
  const double eld = std::exp(l * gp.dd);
  const double emld = std::exp(-l * gp.dd);
  Gains g;
  g.chat = gp.a_under * l * emld / (gp.k + eld) * (l + gp.b_under - 2.0 / gp.k * l * eld);
  g.ckl = (gp.k + eld) / (gp.k + emld);
  return g;
}

double gain_objective(const Gains& g, double q) { return g.ckl * holder_factor(g.chat, q); }

GainParams pick_gains(const GainSearch& s) {
  require_q(s.q);
  static constexpr double kMargins[] = {1.1, 1.2, 1.35, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 5.0, 7.0, 10.0};
  const double l_min = std::max(0.0, -s.b_under);
  GainParams best;
  double best_obj = std::numeric_limits<double>::infinity();
  std::string last_error = "no admissible route";
  std::vector<GainRoute> routes;
  if (s.psi0_route) routes.push_back(GainRoute::Psi0);
  if (s.m_route) routes.push_back(GainRoute::M);
  for (GainRoute route : routes) {
    // l offsets 10^(-2 + i/8), i = 0..32, so l = l_min + 1 is on the grid
    for (int i = 0; i <= 32; ++i) {
      GainParams gp;
      gp.l = l_min + std::pow(10.0, -2.0 + i / 8.0);
      gp.b_under = s.b_under;
      gp.a_bar = s.a_bar;
      gp.a_under = s.a_under;
      gp.dd = s.dd;
      gp.psi0_under = s.psi0_under;
      gp.m_bar = s.m_bar;
      gp.route = route;
      gp.dirichlet = s.dirichlet;
      gp.p0 = s.p0;
      gp.p_max = s.p_max;
      double floor;
      try {
        floor = gain_k_floor(gp);
      } catch (const ConstraintError& e) {
        last_error = e.what();
        continue;
      }
      if (!std::isfinite(floor)) continue;
      for (double margin : kMargins) {
        gp.k = margin * floor;
        if (!(gp.k > floor)) continue;
        const Gains g = gains(gp);
        if (!(g.chat > 0.0)) continue;
        const double obj = gain_objective(g, s.q);
        if (std::isfinite(obj) && obj < best_obj) {
          best_obj = obj;
          best = gp;
        }
      }
    }
  }
  if (!std::isfinite(best_obj)) throw ConstraintError("gain search", "empty feasible set (" + last_error + ")");
  return best;
}

TimeSeries thm31ii_lq_iss(const BoundInputs& in, const GainParams& gp) {
  const Gains g = gains(gp);
  const double gain = g.ckl * holder_factor(g.chat, in.q);
  require_aligned(in.d_series, in.f_series);
  return combine(
      in.d_series.times(), [&](double t) { return g.ckl * std::exp(-g.chat * t); }, in.w0_norm, gain,
      prefix_lq(in.d_series, in.q), gain, prefix_lq(in.f_series, in.q));
}

TimeSeries dirichlet_flux_series(const DirichletData& dd) {
  return dirichlet_series(dd, [&](double d, double psi1) { return std::abs(psi2_invert(dd.psi2, d / psi1)); });
}

TimeSeries dirichlet_modular_series(const DirichletData& dd, const YoungFunction& y) {
  return dirichlet_series(dd, [&](double d, double psi1) {
    return y.big_phi(std::abs(psi2_invert(dd.psi2, std::abs(d) / psi1)));
  });
}

TimeSeries thm32_weighted_dirichlet(const BoundInputs& in, double cbar, const DirichletData& dd) {
  const TimeSeries bd = dirichlet_flux_series(dd);
  require_aligned(bd, in.f_series);
  double hf;
  if (in.q == 1.0) {
    if (!(cbar >= 0.0)) fail(ErrorKind::Domain, "cbar must be >= 0");
    hf = 1.0;
  } else {
    hf = holder_factor(cbar, in.q);
  }
  return combine(
      bd.times(), [&](double t) { return std::exp(-cbar * t); }, in.w0_norm, hf, prefix_lq(bd, in.q), hf,
      prefix_lq(in.f_series, in.q));
}

TimeSeries thm32ii_weighted_dirichlet(const BoundInputs& in, const GainParams& gp, const DirichletData& dd) {
  if (!gp.dirichlet) fail(ErrorKind::Config, "Dirichlet gains expected");
  const Gains g = gains(gp);
  const double gain = g.ckl * holder_factor(g.chat, in.q);
  const TimeSeries bd = dirichlet_flux_series(dd);
  require_aligned(bd, in.f_series);
  return combine(
      bd.times(), [&](double t) { return g.ckl * std::exp(-g.chat * t); }, in.w0_norm, gain, prefix_lq(bd, in.q), gain,
      prefix_lq(in.f_series, in.q));
}

double thm41_constant(double cbar, const YoungFunction& y) {
  if (!(cbar > 0.0)) fail(ErrorKind::Domain, "cbar must be > 0");
  const double d0 = y.delta0();
  const double d1 = y.delta1();
  const double base = (1.0 / cbar) * d1 * d1 / (d0 * (1.0 + d1)) * y.big_phi_tilde(1.0);
  return 2.0 * std::max(std::pow(base, 1.0 / (1.0 + d0)), std::pow(base, 1.0 / (1.0 + d1)));
}

TimeSeries thm41_lphi_iss(const BoundInputs& in, double cbar, const YoungFunction& y) {
  const double C = thm41_constant(cbar, y);
  require_aligned(in.d_series, in.f_series);
  return combine(
      in.d_series.times(), [&](double t) { return std::exp(-cbar * t); }, in.w0_norm, C,
      time_luxemburg_norm_prefix(y, in.d_series), C, time_luxemburg_norm_prefix(y, in.f_series));
}

TimeSeries thm42_lphi_dirichlet(const BoundInputs& in, double cbar, const YoungFunction& y, const DirichletData& dd) {
  const double C = thm41_constant(cbar, y);
  const TimeSeries bd = dirichlet_flux_series(dd);
  require_aligned(bd, in.f_series);
  return combine(
      bd.times(), [&](double t) { return std::exp(-cbar * t); }, in.w0_norm, C, time_luxemburg_norm_prefix(y, bd), C,
      time_luxemburg_norm_prefix(y, in.f_series));
}

double default_kphi_eps(double cbar, double psi0_under, const YoungFunction& y) {
  return 0.5 * std::min((1.0 + y.delta0()) / y.delta1() * psi0_under, cbar * (1.0 + y.delta0()));
}

KPhiBound thm43_kphi_iss(const BoundInputs& in, double cbar, const YoungFunction& y, double eps, double psi0_under) {
  check_eps_window(eps, cbar, y, psi0_under, true);
  KPhiBound r = kphi_common(eps, cbar, y);
  require_aligned(in.d_series, in.f_series);
  const double gain = r.c_eps * holder_factor(r.lambda, in.q);
  r.modular = combine(
      in.d_series.times(), [&](double t) { return std::exp(-r.lambda * t); }, in.w0_norm, gain,
      prefix_lq(in.d_series, in.q), gain, prefix_lq(in.f_series, in.q));
  fill_norm_corollary(r, y);
  return r;
}

KPhiBound thm44_weighted_kphi(const BoundInputs& in, double cbar, const YoungFunction& y, double eps,
                              const DirichletData& dd) {
  check_eps_window(eps, cbar, y, 0.0, false);
  KPhiBound r = kphi_common(eps, cbar, y);
  const TimeSeries bd = dirichlet_modular_series(dd, y);
  require_aligned(bd, in.f_series);
  const double hf = holder_factor(r.lambda, in.q);
  const double f_gain = hf * r.c_eps * (1.0 + y.delta1()) / (1.0 + y.delta0());
  r.modular = combine(
      bd.times(), [&](double t) { return std::exp(-r.lambda * t); }, in.w0_norm, hf, prefix_lq(bd, in.q), f_gain,
      prefix_lq(in.f_series, in.q));
  fill_norm_corollary(r, y);
  return r;
}

double weighted_f_modular(const YoungFunction& y, const GridFunction1D& p, const GridFunction1D& f) {
  if (!p.same_grid(f)) fail(ErrorKind::Shape, "weight and f live on different grids");
  const double e0 = 1.0 + y.delta0();
  const double e1 = 1.0 + y.delta1();
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double ap = std::abs(p[i]);
    v[i] = std::max(std::pow(ap, e0), std::pow(ap, e1)) * y.big_phi(std::abs(f[i]));
  }
  return trapezoid_integral(GridFunction1D(f.x_lo(), f.x_hi(), std::move(v)));
}

TimeSeries prop51_sign_changing(const BoundInputs& in, double cbar_chosen, double u_inf, double cbar_floor) {
  const double need = std::max(cbar_floor, 0.0);
  if (!(cbar_chosen > need))
    fail(ErrorKind::Domain, "chosen cbar " + num(cbar_chosen) + " must exceed max{max(c - b_x - mu), 0} = " + num(need));
  if (!(u_inf >= 0.0)) fail(ErrorKind::Domain, "u_inf must be >= 0");
  const double pre = std::exp(u_inf);
  require_aligned(in.d_series, in.f_series);
  return combine(
      in.d_series.times(), [&](double t) { return pre * std::exp(-cbar_chosen * t); }, in.w0_norm, pre,
      prefix_lq(in.d_series, 1.0), pre, prefix_lq(in.f_series, 1.0));
}

double robin52_beta(double a, double b, double theta, double x) {
  return std::exp(-b * x / (2.0 * a)) * std::cos(theta * x);
}

Robin52Result robin_weighted_52(double a, double b, double c, double theta, double K, const Robin52Inputs& in) {
  Robin52Result r;
  r.cbar = c + a * theta * theta + b * b / (4.0 * a);
  r.k0 = K - b / (2.0 * a);
  r.k1 = K + b / (2.0 * a) + theta * std::tan(theta);
  r.validity = {
      {"a > 0", a, a > 0.0},
      {"theta in [0, pi/2)", theta, theta >= 0.0 && theta < M_PI / 2},
      {"cbar = c + a theta^2 + b^2/(4a) > 0", r.cbar, r.cbar > 0.0},
      {"K0 = K - b/(2a) > 0", r.k0, r.k0 > 0.0},
      {"K1 = K + b/(2a) + theta tan(theta) > 0", r.k1, r.k1 > 0.0},
  };
  r.valid = std::all_of(r.validity.begin(), r.validity.end(), [](const ValidityItem& v) { return v.ok; });
  if (!r.valid) return r;
  require_aligned(in.d0, in.d1);
  require_aligned(in.d0, in.f_weighted_sup);
  const double e1 = std::exp(-b / (2.0 * a));
  double s0 = 0.0, s1 = 0.0, sf = 0.0;
  for (std::size_t k = 0; k < in.d0.size(); ++k) {
    const double t = in.d0.times()[k];
    s0 = std::max(s0, std::abs(in.d0.values()[k]));
    s1 = std::max(s1, std::abs(in.d1.values()[k]));
    sf = std::max(sf, std::abs(in.f_weighted_sup.values()[k]));
    r.bound.append(t, std::exp(-r.cbar * t) * in.w0_weighted + (s0 + e1 * s1 + sf) / r.cbar);
  }
  return r;
}

}  // namespace issv
