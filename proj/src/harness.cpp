#include "issv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "issv/errors.hpp"
#include "issv/lyapunov.hpp"
#include "numeric.hpp"

namespace issv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool le_tol(double a, double b) { return a <= b + 1e-9 * std::max(1.0, std::abs(b)); }

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = GridFunction1D::node(lo, hi, n, i);
  return v;
}

// Sample sets shared by the structural checks.
struct Samples {
  std::vector<double> xs, ts, ss, wxs;
  double h = 0.0;  // finite-difference step in x
};

Samples make_samples(const PdeProblem& p, double T) {
  Samples s;
  s.xs = linspace(p.x_lo, p.x_hi, 41);
  s.ts = linspace(0.0, T, 5);
  double sup0 = 0.0;
  for (double x : linspace(p.x_lo, p.x_hi, 201)) sup0 = std::max(sup0, std::abs(p.w0.eval_xt(x, 0.0)));
  const double W = std::max(1.0, 2.0 * sup0);
  for (double v : detail::logspace(1e-3, W, 24)) {
    s.ss.push_back(v);
    s.ss.push_back(-v);
  }
  s.wxs = {-10.0, -1.0, 0.0, 1.0, 10.0};
  s.h = 1e-5 * p.length();
  return s;
}

double dx(const Expr& e, double x, double t, double h) { return (e.eval_xt(x + h, t) - e.eval_xt(x - h, t)) / (2.0 * h); }

YoungFunction young_of(const Scenario& s) { return s.young ? s.young->build() : YoungFunction::power(2.0); }

double param(const Scenario& s, const char* key, double fallback) {
  auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

GridFunction1D weight_of(const Scenario& s, const PdeProblem& p) {
  return solve_weight_p(p.a, p.b, param(s, "p0", 2.0), p.x_lo, p.x_hi, s.solver.n_x);
}

bool uses_time(const Expr& e) { return e.uses(Var::t); }

void require_prop51_shape(const PdeProblem& p) {
  if (!p.m.is_zero()) fail(ErrorKind::Config, "prop51 requires m = 0");
  for (const Expr* e : {&p.a, &p.b, &p.c, &p.mu})
    if (uses_time(*e)) fail(ErrorKind::Config, "prop51 requires a, b, c, mu independent of t ('" + e->text() + "')");
}

struct Robin52Shape {
  double a, b, c, theta, K;
};

Robin52Shape require_robin52_shape(const Scenario& s, const PdeProblem& p) {
  for (const Expr* e : {&p.a, &p.b, &p.c})
    if (!e->is_constant()) fail(ErrorKind::Config, "robin52 requires constant a, b, c ('" + e->text() + "')");
  if (p.x_lo != 0.0 || p.x_hi != 1.0) fail(ErrorKind::Config, "robin52 is posed on (0, 1)");
  if (!p.h.is_zero() || !p.g.is_zero() || !p.mu.is_zero()) fail(ErrorKind::Config, "robin52 is linear: h = g = mu = 0");
  Robin52Shape r{p.a.constant_value(), p.b.constant_value(), p.c.constant_value(), param(s, "theta", 0.5),
                 param(s, "K", 1.0)};
  for (double x : {p.x_lo, p.x_hi})
    for (double w : {-2.0, -0.5, 0.5, 2.0})
      for (double t : {0.0, s.solver.T}) {
        const double v = p.psi.eval_xtw(x, t, w);
        if (std::abs(v - r.K * w) > 1e-12 * (1.0 + std::abs(r.K * w)))
          fail(ErrorKind::Config, "robin52 requires psi = K w with K = " + num(r.K));
      }
  return r;
}

// min over samples of (b + a_x)/a.
double b_under_of(const PdeProblem& p, const Samples& sm) {
  double v = kInf;
  for (double t : sm.ts)
    for (double x : sm.xs) v = std::min(v, (p.b.eval_xt(x, t) + dx(p.a, x, t, sm.h)) / p.a.eval_xt(x, t));
  return v;
}

std::pair<double, double> a_range(const PdeProblem& p, const Samples& sm) {
  double lo = kInf, hi = -kInf;
  for (double t : sm.ts)
    for (double x : sm.xs) {
      const double a = p.a.eval_xt(x, t);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  return {lo, hi};
}

// Gain-search inputs; `pw` is the Dirichlet weight or null.
GainSearch gain_search(const Scenario& s, const PdeProblem& p, const GridFunction1D* pw) {
  const Samples sm = make_samples(p, s.solver.T);
  GainSearch gs;
  gs.b_under = b_under_of(p, sm);
  std::tie(gs.a_under, gs.a_bar) = a_range(p, sm);
  gs.dd = std::max(std::abs(p.x_lo), std::abs(p.x_hi));
  gs.psi0_under = p.psi0bar;
  gs.q = s.q;
  gs.dirichlet = pw != nullptr;
  // -m g s <= 0 on samples (p >= 0 does not change the sign)
  bool sign_ok = true;
  if (!p.g.is_zero() && !p.m.is_zero())
    for (double t : sm.ts)
      for (double x : sm.xs)
        for (double w : sm.ss)
          if (-p.m.eval_xt(x, t) * p.g.eval_xtw(x, t, w) * w > 1e-12) sign_ok = false;
  gs.psi0_route = sign_ok;
  // |m / m_x| (resp. |p m / (p m)_x|) bounded
  bool m_ok = !p.m.is_zero();
  double m_bar = 0.0;
  if (pw) {
    const auto& pv = pw->values();
    const double hx = pw->h();
    for (std::size_t i = 1; m_ok && i + 1 < pv.size(); ++i) {
      for (double t : sm.ts) {
        const double pm = pv[i] * p.m.eval_xt(pw->x(i), t);
        const double dpm =
            (pv[i + 1] * p.m.eval_xt(pw->x(i + 1), t) - pv[i - 1] * p.m.eval_xt(pw->x(i - 1), t)) / (2.0 * hx);
        if (std::abs(dpm) < 1e-12) {
          m_ok = false;
          break;
        }
        m_bar = std::max(m_bar, std::abs(pm / dpm));
      }
    }
    gs.p0 = param(s, "p0", 2.0);
    double pmax = 0.0;
    for (std::size_t i = 0; i + 1 < pv.size(); ++i) pmax = std::max(pmax, std::abs(pv[i + 1] - pv[i]) / hx);
    const BoundaryPair bd = boundary_derivatives(*pw);
    gs.p_max = std::max({pmax, std::abs(bd.left), std::abs(bd.right)});
  } else if (m_ok) {
    for (double t : sm.ts)
      for (double x : sm.xs) {
        const double mx = dx(p.m, x, t, sm.h);
        if (std::abs(mx) < 1e-12) {
          m_ok = false;
          break;
        }
        m_bar = std::max(m_bar, std::abs(p.m.eval_xt(x, t) / mx));
      }
  }
  gs.m_route = m_ok;
  gs.m_bar = m_ok ? m_bar : 0.0;
  return gs;
}

ReportRow make_row(double t, double lhs, double rhs) {
  ReportRow r{t, lhs, rhs, rhs - lhs, 0.0};
  if (rhs > 0.0) r.rel_margin = r.margin / rhs;
  else r.rel_margin = r.margin >= 0.0 ? 0.0 : -1.0;
  return r;
}

GridFunction1D sample_f(const PdeProblem& p, std::size_t n, double t) {
  return GridFunction1D::sample(p.x_lo, p.x_hi, n, [&](double x) { return p.f.eval_xt(x, t); });
}

}  // namespace

double default_tau(const Trajectory& traj) {
  if (traj.states.empty()) fail(ErrorKind::Shape, "empty trajectory");
  return 1e-3 * (sup_norm(traj.states.front()) + 1.0);
}

std::vector<StructuralCheck> structural_checks(const Scenario& s, const PdeProblem& p) {
  const Theorem th = s.theorem;
  const bool dir = theorem_needs_dirichlet(th);
  if (dir != (p.boundary == BoundaryKind::Dirichlet))
    fail(ErrorKind::Config, std::string(theorem_name(th)) + " requires " + (dir ? "dirichlet" : "robin") +
                                " boundary conditions");
  const Samples sm = make_samples(p, s.solver.T);
  std::vector<StructuralCheck> out;
  auto add = [&](const char* tag, std::string desc, double declared, double estimated, bool ok) {
    out.push_back(StructuralCheck{tag, std::move(desc), declared, estimated, ok});
  };

  const auto [a_lo, a_hi] = a_range(p, sm);
  add("A1-1", "0 < a_under <= a <= a_bar", 0.0, a_lo, a_lo > 0.0 && std::isfinite(a_hi));

  if (!p.h.is_zero()) {
    double worst = -kInf;
    for (double t : sm.ts)
      for (double x : sm.xs) {
        const double mu = p.mu.eval_xt(x, t);
        for (double w : sm.ss)
          for (double wx : sm.wxs) worst = std::max(worst, (-p.h.eval_xtwp(x, t, w, wx) * w - mu * w * w) / (w * w));
      }
    add("A2-1", "-h s <= mu s^2 on samples", 0.0, worst, worst <= 1e-9);
  }
  if (!p.g.is_zero()) {
    double worst = -kInf;
    for (double t : sm.ts)
      for (double x : sm.xs) {
        const double g0 = std::abs(p.g0.eval_xt(x, t));
        for (double w : linspace(-p.s0, p.s0, 41)) worst = std::max(worst, std::abs(p.g.eval_xtw(x, t, w)) - g0 * std::abs(w));
      }
    add("A2-2", "|g| <= |g0| |s| for |s| <= s0", p.s0, worst, p.s0 > 0.0 && worst <= 1e-12);
  }

  const bool orlicz_kphi = th == Theorem::Thm43 || th == Theorem::Thm44;
  if (orlicz_kphi) {
    const YoungFunction y = young_of(s);
    const double k0 = 1.0 + y.delta0(), k1 = 1.0 + y.delta1();
    double est = kInf;
    for (double t : sm.ts)
      for (double x : sm.xs) {
        const double bx = dx(p.b, x, t, sm.h);
        est = std::min(est, p.c.eval_xt(x, t) - p.mu.eval_xt(x, t) - std::max(bx / k0, bx / k1));
      }
    add("A2-3'", "0 < cbar <= c - mu - max(b_x/(1+delta0), b_x/(1+delta1))", p.cbar, est,
        p.cbar > 0.0 && le_tol(p.cbar, est));
    if (!dir) {
      double psi0 = kInf;
      for (Endpoint e : {Endpoint::Left, Endpoint::Right}) {
        const double x = p.boundary_x(e);
        const double nu = e == Endpoint::Left ? -1.0 : 1.0;
        for (double t : sm.ts) {
          const double bn = p.b.eval_xt(x, t) * nu;
          const double bmin = std::min(bn / k0, bn / k1);
          for (double w : detail::logspace(1e-4, 1e3, 60))
            for (double sw : {w, -w}) psi0 = std::min(psi0, (p.psi.eval_xtw(x, t, sw) + sw * bmin) / sw);
        }
      }
      add("A3-2'", "0 < psi0bar <= inf (psi + s min(b nu/(1+delta_i)))/s", p.psi0bar, psi0,
          p.psi0bar > 0.0 && le_tol(p.psi0bar, psi0));
    }
  } else if (th != Theorem::Prop51 && th != Theorem::Robin52) {
    const double est = estimate_cbar(p, 201, s.solver.T, 5);
    add("A2-3", "0 <= cbar <= c - b_x - mu", p.cbar, est, p.cbar >= 0.0 && le_tol(p.cbar, est));
  }

  if (!dir) {
    if (!p.g.is_zero() && !p.m.is_zero()) {
      double worst = -kInf;
      for (double t : sm.ts)
        for (double x : sm.xs) {
          const double mx = dx(p.m, x, t, sm.h);
          for (double w : sm.ss) worst = std::max(worst, p.g.eval_xtw(x, t, w) * w * mx);
        }
      add("A3-1", "g s m_x <= 0", 0.0, worst, worst <= 1e-12);
    }
    if (!orlicz_kphi && th != Theorem::Robin52) {
      const double est = estimate_psi0(p, 60, s.solver.T, 5);
      add("A3-2", "0 <= psi0bar <= inf (psi + s b nu + g m nu)/s", p.psi0bar, est,
          p.psi0bar >= 0.0 && le_tol(p.psi0bar, est));
    }
  } else {
    const double p0 = param(s, "p0", 2.0);
    double worst = 0.0;
    bool ok = p0 > 0.0;
    if (ok && !p.g.is_zero() && !p.m.is_zero()) {
      const GridFunction1D pw = weight_of(s, p);
      const auto& pv = pw.values();
      const double hx = pw.h();
      worst = -kInf;
      for (std::size_t i = 1; i + 1 < pv.size(); ++i)
        for (double t : sm.ts) {
          const double dpm =
              (pv[i + 1] * p.m.eval_xt(pw.x(i + 1), t) - pv[i - 1] * p.m.eval_xt(pw.x(i - 1), t)) / (2.0 * hx);
          for (double w : sm.ss) worst = std::max(worst, p.g.eval_xtw(pw.x(i), t, w) * w * dpm);
        }
      ok = worst <= 1e-12;
    }
    add("A3'-1", "p0 > 0 and g s (p m)_x <= 0", p0, worst, ok);

    double psi1_min = kInf;
    for (Endpoint e : {Endpoint::Left, Endpoint::Right})
      for (double t : sm.ts) psi1_min = std::min(psi1_min, p.psi1.eval_xt(p.boundary_x(e), t));
    double step_min = kInf;
    double prev = -kInf;
    bool first = true;
    for (double v : linspace(-1e3, 1e3, 4001)) {
      const double y = p.psi2.eval(Env().set(Var::s, v));
      if (!first) step_min = std::min(step_min, y - prev);
      prev = y;
      first = false;
    }
    add("A3'-2", "psi1 >= psi1_under > 0 and psi2 strictly increasing", 0.0, std::min(psi1_min, step_min),
        psi1_min > 0.0 && step_min > 0.0);
  }

  if (!s.waive_structural)
    for (const auto& c : out)
      if (!c.ok)
        throw ConstraintError(c.tag, c.description + " (declared " + num(c.declared) + ", estimated " +
                                         num(c.estimated) + ")");
  return out;
}

Trajectory simulate(const Scenario& s) { return integrate(s.problem.compile(), s.solver); }

DissipationReport dissipation_check(const Trajectory& traj, const PdeProblem& p, double tau, double cbar,
                                    double slack_scale, const GridFunction1D* weight) {
  DissipationReport rep;
  rep.form = weight ? "weighted L1" : "L1";
  const std::size_t n_cp = traj.size();
  if (n_cp == 0) return rep;
  const GridFunction1D& g0 = traj.states.front();
  const std::size_t n = g0.size();
  const double h = g0.h();
  const double L = g0.length();
  if (weight && !weight->same_grid(g0)) fail(ErrorKind::Shape, "weight and trajectory live on different grids");
  BoundaryPair pp{};
  if (weight) {
    pp = boundary_derivatives(*weight);
    pp.left = std::abs(pp.left);
    pp.right = std::abs(pp.right);
  }

  // a_under and max (g0 m)^2 (weighted: p g0^2 m^2) over all checkpoint times
  double a_under = kInf;
  double gm2 = 0.0;
  for (double t : traj.times)
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g0.x(i);
      a_under = std::min(a_under, p.a.eval_xt(x, t));
      const double gm = p.g0.eval_xt(x, t) * p.m.eval_xt(x, t);
      gm2 = std::max(gm2, (weight ? (*weight)[i] : 1.0) * gm * gm);
    }
  if (!(a_under > 0.0)) fail(ErrorKind::Domain, "dissipation check needs a > 0");

  std::vector<double> V(n_cp), A(n_cp), B(n_cp);
  for (std::size_t k = 0; k < n_cp; ++k) {
    const double t = traj.times[k];
    const GridFunction1D& w = traj.states[k];
    const GridFunction1D f = sample_f(p, n, t);
    const GridFunction1D cm = GridFunction1D::sample(p.x_lo, p.x_hi, n, [&](double x) {
      return std::abs(p.c.eval_xt(x, t)) + std::abs(p.mu.eval_xt(x, t));
    });
    if (weight) {
      V[k] = v_tau_weighted(*weight, w, tau);
      double a1 = 0.0;
      for (Endpoint e : {Endpoint::Left, Endpoint::Right}) {
        const double x = p.boundary_x(e);
        const double pe = e == Endpoint::Left ? pp.left : pp.right;
        a1 += p.a.eval_xt(x, t) * rho(tau, dirichlet_value(p, t, e)) * pe;
      }
      A[k] = a1 + weighted_l1_norm(*weight, f);
      B[k] = 3.0 / 8.0 * (weighted_l1_norm(*weight, cm) + L / a_under * gm2);
    } else {
      V[k] = v_tau(w, tau);
      A[k] = std::abs(traj.d_left.values()[k]) + std::abs(traj.d_right.values()[k]) + l1_norm(f);
      B[k] = 3.0 / 8.0 *
             (trapezoid_integral(cm) + std::abs(p.b.eval_xt(p.x_lo, t)) + std::abs(p.b.eval_xt(p.x_hi, t)) +
              L / a_under * gm2);
    }
  }

  rep.worst_excess = -kInf;
  rep.worst_excess_over_slack = -kInf;
  for (std::size_t k = 0; k + 1 < n_cp; ++k) {
    const double D = traj.times[k + 1] - traj.times[k];
    if (!(D > 0.0)) continue;
    const double lhs = (V[k + 1] - V[k]) / D;
    const double Bk = std::max(B[k], B[k + 1]);
    rep.B = std::max(rep.B, Bk);
    const double rhs = -cbar * 0.5 * (V[k] + V[k + 1]) + 0.5 * (A[k] + A[k + 1]) + Bk * tau;
    const double slack = slack_scale * (D + h * h);
    const double excess = lhs - rhs;
    rep.intervals++;
    rep.worst_excess = std::max(rep.worst_excess, excess);
    rep.worst_excess_over_slack = std::max(rep.worst_excess_over_slack, excess / slack);
    if (excess > slack) rep.violations++;
  }
  if (rep.intervals == 0) {
    rep.worst_excess = 0.0;
    rep.worst_excess_over_slack = 0.0;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

RunResult run_scenario(const Scenario& s) {
  const PdeProblem p = s.problem.compile();
  const Theorem th = s.theorem;
  VerificationReport rep;
  rep.structural = structural_checks(s, p);
  if (th == Theorem::Prop51) require_prop51_shape(p);
  std::optional<Robin52Shape> r52;
  if (th == Theorem::Robin52) r52 = require_robin52_shape(s, p);
  if ((th == Theorem::Thm43 || th == Theorem::Thm44) && !p.g.is_zero())
    fail(ErrorKind::Config, std::string(theorem_name(th)) + " requires g = 0");

  RunResult out;
  out.trajectory = integrate(p, s.solver);
  const Trajectory& tr = out.trajectory;
  const std::size_t n = s.solver.n_x;
  const std::size_t n_cp = tr.size();

  rep.scenario_name = s.name;
  rep.scenario_hash = s.hash();
  rep.theorem = theorem_name(th);
  rep.rel_margin_slack = s.tol.rel_margin_slack;
  rep.tau = s.tau ? *s.tau : default_tau(tr);
  rep.tau_slack = 3.0 * rep.tau * p.length() / 8.0;
  rep.dt_used = tr.dt_used;
  rep.steps = tr.steps;
  rep.constants["cbar"] = p.cbar;
  rep.constants["psi0bar"] = p.psi0bar;
  rep.constants["q"] = s.q;

  std::vector<GridFunction1D> fs;
  fs.reserve(n_cp);
  for (double t : tr.times) fs.push_back(sample_f(p, n, t));
  const GridFunction1D& w0 = tr.states.front();

  TimeSeries d_l1, f_l1;
  for (std::size_t k = 0; k < n_cp; ++k) {
    d_l1.append(tr.times[k], std::abs(tr.d_left.values()[k]) + std::abs(tr.d_right.values()[k]));
    f_l1.append(tr.times[k], l1_norm(fs[k]));
  }

  std::optional<GridFunction1D> pw;
  std::optional<DirichletData> dd;
  if (theorem_needs_dirichlet(th)) {
    pw = weight_of(s, p);
    rep.constants["p0"] = param(s, "p0", 2.0);
    const BoundaryPair bd = boundary_derivatives(*pw);
    dd = DirichletData{p.x_lo, p.x_hi, p.a, p.psi1, p.psi2, tr.d_left, tr.d_right,
                       BoundaryPair{std::abs(bd.left), std::abs(bd.right)}};
  }
  std::optional<YoungFunction> y;
  if (theorem_needs_young(th)) {
    y = young_of(s);
    rep.constants["delta0"] = y->delta0();
    rep.constants["delta1"] = y->delta1();
  }

  std::vector<double> lhs(n_cp);
  TimeSeries rhs;
  BoundInputs in;
  in.q = s.q;

  auto l1_lhs = [&] {
    rep.lhs_kind = "L1";
    for (std::size_t k = 0; k < n_cp; ++k) lhs[k] = l1_norm(tr.states[k]);
    in.w0_norm = l1_norm(w0);
    in.d_series = d_l1;
    in.f_series = f_l1;
  };
  auto weighted_lhs = [&] {
    rep.lhs_kind = "weighted L1";
    for (std::size_t k = 0; k < n_cp; ++k) lhs[k] = weighted_l1_norm(*pw, tr.states[k]);
    in.w0_norm = weighted_l1_norm(*pw, w0);
    in.d_series = dirichlet_flux_series(*dd);
    TimeSeries f;
    for (std::size_t k = 0; k < n_cp; ++k) f.append(tr.times[k], weighted_l1_norm(*pw, fs[k]));
    in.f_series = f;
  };
  auto store_gains = [&](const GainParams& gp) {
    rep.gain_params = gp;
    rep.gains = gains(gp);
    rep.constants["chat"] = rep.gains->chat;
    rep.constants["ckl"] = rep.gains->ckl;
  };

  switch (th) {
    case Theorem::Thm31i:
      l1_lhs();
      rhs = s.q == 1.0 ? thm31_l1_estimate(in, p.cbar) : thm31_lq_iss(in, p.cbar);
      if (s.q != 1.0) rep.constants["holder_factor"] = holder_factor(p.cbar, s.q);
      break;
    case Theorem::Thm31ii: {
      l1_lhs();
      const GainParams gp = pick_gains(gain_search(s, p, nullptr));
      store_gains(gp);
      rhs = thm31ii_lq_iss(in, gp);
      break;
    }
    case Theorem::Thm32i:
      weighted_lhs();
      rhs = thm32_weighted_dirichlet(in, p.cbar, *dd);
      break;
    case Theorem::Thm32ii: {
      weighted_lhs();
      const GainParams gp = pick_gains(gain_search(s, p, &*pw));
      store_gains(gp);
      rhs = thm32ii_weighted_dirichlet(in, gp, *dd);
      break;
    }
    case Theorem::Thm41:
      l1_lhs();
      rep.constants["C"] = thm41_constant(p.cbar, *y);
      rhs = thm41_lphi_iss(in, p.cbar, *y);
      break;
    case Theorem::Thm42:
      weighted_lhs();
      rep.constants["C"] = thm41_constant(p.cbar, *y);
      rhs = thm42_lphi_dirichlet(in, p.cbar, *y, *dd);
      break;
    case Theorem::Thm43: {
      rep.lhs_kind = "modular";
      for (std::size_t k = 0; k < n_cp; ++k) lhs[k] = orlicz_modular(*y, tr.states[k]);
      in.w0_norm = orlicz_modular(*y, w0);
      TimeSeries d, f;
      for (std::size_t k = 0; k < n_cp; ++k) {
        d.append(tr.times[k], y->big_phi(std::abs(tr.d_left.values()[k])) + y->big_phi(std::abs(tr.d_right.values()[k])));
        f.append(tr.times[k], orlicz_modular(*y, fs[k]));
      }
      in.d_series = d;
      in.f_series = f;
      const double eps = param(s, "eps", default_kphi_eps(p.cbar, p.psi0bar, *y));
      const KPhiBound b = thm43_kphi_iss(in, p.cbar, *y, eps, p.psi0bar);
      rhs = b.modular;
      rep.constants["eps"] = b.eps;
      rep.constants["lambda"] = b.lambda;
      rep.constants["C_eps"] = b.c_eps;
      double worst = kInf;
      for (std::size_t k = 0; k < n_cp; ++k)
        worst = std::min(worst, make_row(tr.times[k], luxemburg_norm(*y, tr.states[k]), b.norm.values()[k]).rel_margin);
      rep.constants["norm_corollary_min_rel_margin"] = worst;
      rep.notes.push_back(std::string("Luxemburg-norm corollary ") +
                          (worst >= -s.tol.rel_margin_slack ? "holds" : "fails") + " (min rel margin " + num(worst) +
                          ")");
      break;
    }
    case Theorem::Thm44: {
      rep.lhs_kind = "weighted modular";
      for (std::size_t k = 0; k < n_cp; ++k) lhs[k] = weighted_orlicz_modular(*y, *pw, tr.states[k]);
      in.w0_norm = weighted_orlicz_modular(*y, *pw, w0);
      TimeSeries f;
      for (std::size_t k = 0; k < n_cp; ++k) f.append(tr.times[k], weighted_f_modular(*y, *pw, fs[k]));
      in.d_series = dirichlet_modular_series(*dd, *y);
      in.f_series = f;
      const double eps = param(s, "eps", 0.5 * p.cbar * (1.0 + y->delta0()));
      const KPhiBound b = thm44_weighted_kphi(in, p.cbar, *y, eps, *dd);
      rhs = b.modular;
      rep.constants["eps"] = b.eps;
      rep.constants["lambda"] = b.lambda;
      rep.constants["C_eps"] = b.c_eps;
      break;
    }
    case Theorem::Prop51: {
      l1_lhs();
      const EllipticSolution u = solve_elliptic_u(Expr::parse(s.q_expr, slots::kRadial), 401);
      double floor = -kInf;
      const double hx = 1e-5 * p.length();
      for (double x : linspace(p.x_lo, p.x_hi, 401))
        floor = std::max(floor, p.c.eval_xt(x, 0.0) - dx(p.b, x, 0.0, hx) - p.mu.eval_xt(x, 0.0));
      auto it = s.params.find("cbar_chosen");
      if (it == s.params.end()) fail(ErrorKind::Config, "prop51 needs params.cbar_chosen");
      rep.constants["u_inf"] = u.u_inf;
      rep.constants["prefactor"] = std::exp(u.u_inf);
      rep.constants["cbar_floor"] = floor;
      rep.constants["cbar_chosen"] = it->second;
      if (s.q != 1.0) rep.notes.push_back("prop51 is an L1-in-time estimate; q is ignored");
      rhs = prop51_sign_changing(in, it->second, u.u_inf, floor);
      break;
    }
    case Theorem::Robin52: {
      rep.lhs_kind = "beta-weighted L1";
      const auto& r = *r52;
      const GridFunction1D beta = GridFunction1D::sample(p.x_lo, p.x_hi, n, [&](double x) {
        return robin52_beta(r.a, r.b, r.theta, x);
      });
      for (std::size_t k = 0; k < n_cp; ++k) lhs[k] = weighted_l1_norm(beta, tr.states[k]);
      Robin52Inputs ri;
      ri.w0_weighted = weighted_l1_norm(beta, w0);
      for (std::size_t k = 0; k < n_cp; ++k) {
        const double t = tr.times[k];
        ri.d0.append(t, -tr.d_left.values()[k]);
        ri.d1.append(t, tr.d_right.values()[k]);
        double sup = 0.0;
        for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, beta[i] * std::abs(fs[k][i]));
        ri.f_weighted_sup.append(t, sup);
      }
      const Robin52Result res = robin_weighted_52(r.a, r.b, r.c, r.theta, r.K, ri);
      for (const auto& v : res.validity) rep.structural.push_back(StructuralCheck{"robin52", v.name, 0.0, v.value, v.ok});
      rep.constants["theta"] = r.theta;
      rep.constants["K"] = r.K;
      rep.constants["cbar_weighted"] = res.cbar;
      rep.constants["K0"] = res.k0;
      rep.constants["K1"] = res.k1;
      if (!res.valid) {
        for (const auto& v : res.validity)
          if (!v.ok) throw ConstraintError(v.name, "value " + num(v.value));
      }
      rhs = res.bound;
      break;
    }
  }

  for (std::size_t k = 0; k < n_cp; ++k) rep.rows.push_back(make_row(tr.times[k], lhs[k], rhs.values()[k]));
  rep.min_rel_margin = kInf;
  for (const auto& r : rep.rows) rep.min_rel_margin = std::min(rep.min_rel_margin, r.rel_margin);
  if (rep.rows.empty()) rep.min_rel_margin = 0.0;
  rep.pass = rep.min_rel_margin >= -rep.rel_margin_slack;

  rep.tau_audit_worst = 0.0;
  for (const auto& w : tr.states) rep.tau_audit_worst = std::max(rep.tau_audit_worst, std::abs(v_tau(w, rep.tau) - l1_norm(w)));
  rep.tau_audit_pass = rep.tau_audit_worst <= rep.tau_slack * (1.0 + 1e-12);

  switch (th) {
    case Theorem::Thm31i:
    case Theorem::Thm31ii:
    case Theorem::Thm41:
    case Theorem::Thm43:
      rep.dissipation = dissipation_check(tr, p, rep.tau, p.cbar, s.tol.dissipation_slack_scale);
      break;
    case Theorem::Thm32i:
    case Theorem::Thm32ii:
    case Theorem::Thm42:
    case Theorem::Thm44:
      rep.dissipation = dissipation_check(tr, p, rep.tau, p.cbar, s.tol.dissipation_slack_scale, &*pw);
      break;
    default:
      break;
  }

  rep.notes.push_back("bound certified on 1 scenario (" + std::to_string(n_cp) + " checkpoints); this is not a proof of ISS");
  out.report = std::move(rep);
  return out;
}

}  // namespace issv
