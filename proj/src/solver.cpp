#include "issv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "issv/errors.hpp"
#include "numeric.hpp"

namespace issv {

namespace {

// A coefficient sampled on a fixed set of points, refreshed only when it depends on t.
class FieldCache {
 public:
  FieldCache(const Expr& e, const std::vector<double>& xs) : e_(&e), xs_(&xs), values_(xs.size(), 0.0) {
    zero_ = e.is_zero();
    time_dependent_ = e.uses(Var::t);
    if (e.is_constant()) std::fill(values_.begin(), values_.end(), e.constant_value());
    else if (!time_dependent_) fill(0.0);
  }

  const std::vector<double>& at(double t) {
    if (time_dependent_ && t != last_t_) fill(t);
    return values_;
  }
  bool zero() const noexcept { return zero_; }

 private:
  void fill(double t) {
    for (std::size_t i = 0; i < xs_->size(); ++i) values_[i] = e_->eval_xt((*xs_)[i], t);
    last_t_ = t;
  }

  const Expr* e_;
  const std::vector<double>* xs_;
  std::vector<double> values_;
  bool zero_ = false;
  bool time_dependent_ = false;
  double last_t_ = std::numeric_limits<double>::quiet_NaN();
};

class Discretization {
 public:
  Discretization(const PdeProblem& p, std::size_t n, Advection adv)
      : p_(p),
        n_(n),
        h_(p.length() / static_cast<double>(n - 1)),
        adv_(adv),
        xs_(make_nodes(p, n)),
        xhalf_(make_half(p, n)),
        a_half_(p.a, xhalf_),
        b_(p.b, xs_),
        c_(p.c, xs_),
        m_(p.m, xs_),
        f_(p.f, xs_),
        gvals_(n + 2, 0.0) {
    if (n < 3) fail(ErrorKind::Config, "solver needs n_x >= 3");
    has_h_ = !p.h.is_zero();
    has_g_ = !p.g.is_zero() && !m_.zero();
    h_uses_wx_ = p.h.uses(Var::wx);
  }

  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  const std::vector<double>& nodes() const noexcept { return xs_; }

  double ghost(const std::vector<double>& w, double t, Endpoint e) const {
    const bool left = e == Endpoint::Left;
    const double xb = left ? p_.x_lo : p_.x_hi;
    const double wb = left ? w.front() : w.back();
    const double winner = left ? w[1] : w[n_ - 2];
    const double a = p_.a.eval_xt(xb, t);
    if (!(a > 0.0)) fail(ErrorKind::Domain, "diffusion coefficient a must be > 0 at the boundary");
    const double flux = p_.d(e).eval_xt(0.0, t) - p_.psi.eval_xtw(xb, t, wb);
    return winner + 2.0 * h_ * flux / a;
  }

  void rhs(const std::vector<double>& w, double t, std::vector<double>& out) {
    const bool robin = p_.boundary == BoundaryKind::Robin;
    const std::size_t n = n_;
    const double h = h_;
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 0.5 / h;
    const auto& ah = a_half_.at(t);
    const auto& b = b_.at(t);
    const auto& c = c_.at(t);
    const auto& m = m_.at(t);
    const auto& f = f_.at(t);

    double gl = 0.0;
    double gr = 0.0;
    double flux_l = 0.0;
    double flux_r = 0.0;
    if (robin) {
      gl = ghost(w, t, Endpoint::Left);
      gr = ghost(w, t, Endpoint::Right);
      flux_l = p_.d_left.eval_xt(0.0, t) - p_.psi.eval_xtw(p_.x_lo, t, w.front());
      flux_r = p_.d_right.eval_xt(0.0, t) - p_.psi.eval_xtw(p_.x_hi, t, w.back());
    }
    auto wat = [&](std::ptrdiff_t i) {
      if (i < 0) return gl;
      if (i >= static_cast<std::ptrdiff_t>(n)) return gr;
      return w[static_cast<std::size_t>(i)];
    };

    const std::size_t lo = robin ? 0 : 1;
    const std::size_t hi = robin ? n : n - 1;

    // g on nodes, with ghost points at gvals_[0] and gvals_[n + 1].
    if (has_g_) {
      for (std::size_t i = 0; i < n; ++i) gvals_[i + 1] = p_.g.eval_xtw(xs_[i], t, w[i]);
      if (robin) {
        gvals_[0] = p_.g.eval_xtw(p_.x_lo - h, t, gl);
        gvals_[n + 1] = p_.g.eval_xtw(p_.x_hi + h, t, gr);
      }
    }

    for (std::size_t i = lo; i < hi; ++i) {
      const auto ii = static_cast<std::ptrdiff_t>(i);
      const double wm = wat(ii - 1);
      const double wi = w[i];
      const double wp = wat(ii + 1);
      const double wx = (wp - wm) * inv_2h;

      double diff;
      if (i == 0)
        diff = (2.0 / h) * (flux_l + ah[0] * (w[1] - wi) / h);
      else if (i == n - 1)
        diff = (2.0 / h) * (flux_r - ah[n - 2] * (wi - w[n - 2]) / h);
      else
        diff = (ah[i] * (wp - wi) - ah[i - 1] * (wi - wm)) * inv_h2;

      double adv = 0.0;
      if (!b_.zero()) {
        if (adv_ == Advection::Upwind)
          adv = b[i] * (b[i] > 0.0 ? (wi - wm) / h : (wp - wi) / h);
        else
          adv = b[i] * wx;
      }
      double r = diff - adv - c[i] * wi + f[i];
      if (has_h_) r -= h_uses_wx_ ? p_.h.eval_xtwp(xs_[i], t, wi, wx) : p_.h.eval_xtw(xs_[i], t, wi);
      if (has_g_) r -= m[i] * (gvals_[i + 2] - gvals_[i]) * inv_2h;
      out[i] = r;
    }
    if (!robin) {
      out.front() = 0.0;
      out.back() = 0.0;
    }
  }

 private:
  static std::vector<double> make_nodes(const PdeProblem& p, std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = GridFunction1D::node(p.x_lo, p.x_hi, n, i);
    return xs;
  }
  static std::vector<double> make_half(const PdeProblem& p, std::size_t n) {
    std::vector<double> xs(n - 1);
    const double h = p.length() / static_cast<double>(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) xs[i] = p.x_lo + (static_cast<double>(i) + 0.5) * h;
    return xs;
  }

  const PdeProblem& p_;
  std::size_t n_;
  double h_;
  Advection adv_;
  std::vector<double> xs_;
  std::vector<double> xhalf_;
  FieldCache a_half_, b_, c_, m_, f_;
  std::vector<double> gvals_;
  bool has_h_ = false;
  bool has_g_ = false;
  bool h_uses_wx_ = false;
};

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::vector<double> sample_times(double T, std::size_t n_t) {
  std::vector<double> ts(std::max<std::size_t>(n_t, 1));
  for (std::size_t j = 0; j < ts.size(); ++j) ts[j] = ts.size() == 1 ? 0.0 : T * static_cast<double>(j) / static_cast<double>(ts.size() - 1);
  return ts;
}

}  // namespace

GridFunction1D semidiscrete_rhs(const PdeProblem& p, const GridFunction1D& w, double t, Advection adv) {
  if (w.x_lo() != p.x_lo || w.x_hi() != p.x_hi) fail(ErrorKind::Shape, "state grid does not cover the problem domain");
  Discretization disc(p, w.size(), adv);
  std::vector<double> out(w.size(), 0.0);
  disc.rhs(w.values(), t, out);
  if (!all_finite(out)) throw BlowUpError(t);
  return GridFunction1D(p.x_lo, p.x_hi, std::move(out));
}

double apply_robin_ghost(const PdeProblem& p, const GridFunction1D& w, double t, Endpoint e) {
  if (p.boundary != BoundaryKind::Robin) fail(ErrorKind::Config, "ghost values exist only at Robin endpoints");
  Discretization disc(p, w.size(), Advection::Central);
  return disc.ghost(w.values(), t, e);
}

double psi2_invert(const Expr& psi2, double y) {
  if (!std::isfinite(y)) fail(ErrorKind::Domain, "psi2_invert: target must be finite");
  auto f = [&](double s) { return psi2.eval(Env().set(Var::s, s)); };
  double lo = -1.0;
  double hi = 1.0;
  while (f(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) fail(ErrorKind::Overflow, "psi2_invert: bracket grew beyond 1e300");
  }
  while (f(lo) > y) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e300) fail(ErrorKind::Overflow, "psi2_invert: bracket grew beyond -1e300");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v == y) return mid;
    if (v < y)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-13) break;
  }
  return 0.5 * (lo + hi);
}

double dirichlet_value(const PdeProblem& p, double t, Endpoint e) {
  const double x = p.boundary_x(e);
  const double psi1 = p.psi1.eval_xt(x, t);
  if (!(psi1 > 0.0)) fail(ErrorKind::Domain, "psi1 must be > 0 on the boundary");
  return psi2_invert(p.psi2, p.d(e).eval_xt(0.0, t) / psi1);
}

double stable_dt(const PdeProblem& p, const SolverConfig& cfg) {
  const std::size_t n = cfg.n_x;
  const double h = p.length() / static_cast<double>(n - 1);
  const auto ts = sample_times(cfg.T, 5);
  double w_range = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    w_range = std::max(w_range, 2.0 * std::abs(p.w0.eval_xt(GridFunction1D::node(p.x_lo, p.x_hi, n, i), 0.0)));
  double a_max = 0.0;
  double adv_max = 0.0;
  double react_max = 0.0;
  constexpr int kWSamples = 21;
  const std::size_t stride = std::max<std::size_t>(1, n / 50);
  for (double t : ts) {
    for (std::size_t i = 0; i < n; i += stride) {
      const double x = GridFunction1D::node(p.x_lo, p.x_hi, n, i);
      const double a = p.a.eval_xt(x, t);
      if (!(a > 0.0)) fail(ErrorKind::Domain, "diffusion coefficient a must be > 0 (A1-1)");
      a_max = std::max(a_max, a);
      double gw = 0.0;
      double hw = 0.0;
      for (int k = 0; k < kWSamples; ++k) {
        const double s = -w_range + 2.0 * w_range * k / (kWSamples - 1);
        const double ds = 1e-6 * w_range;
        if (!p.g.is_zero()) gw = std::max(gw, std::abs(p.g.eval_xtw(x, t, s + ds) - p.g.eval_xtw(x, t, s - ds)) / (2 * ds));
        if (!p.h.is_zero() && !p.h.uses(Var::wx))
          hw = std::max(hw, std::abs(p.h.eval_xtw(x, t, s + ds) - p.h.eval_xtw(x, t, s - ds)) / (2 * ds));
      }
      adv_max = std::max(adv_max, std::abs(p.b.eval_xt(x, t)) + std::abs(p.m.eval_xt(x, t)) * gw);
      react_max = std::max(react_max, std::abs(p.c.eval_xt(x, t)) + hw);
    }
  }
  double dt = std::min(h * h / (2.0 * a_max), h / std::max(adv_max, std::numeric_limits<double>::epsilon()));
  // Keep stiff reaction terms inside the RK4 stability interval as well.
  if (react_max > 0.0) dt = std::min(dt, 2.5 / react_max);
  return cfg.cfl_safety * dt;
}

Trajectory integrate(const PdeProblem& p, const SolverConfig& cfg) {
  if (cfg.n_x < 3) fail(ErrorKind::Config, "n_x must be >= 3");
  if (!(cfg.T > 0.0)) fail(ErrorKind::Config, "T must be > 0");
  if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) fail(ErrorKind::Config, "cfl_safety must lie in (0, 1]");
  if (!(cfg.checkpoint_dt > 0.0)) fail(ErrorKind::Config, "checkpoint_dt must be > 0");

  const std::size_t n = cfg.n_x;
  Discretization disc(p, n, cfg.advection);
  const bool dirichlet = p.boundary == BoundaryKind::Dirichlet;

  const double dt_max = stable_dt(p, cfg);
  if (!(dt_max > 1e-14)) fail(ErrorKind::Solver, "time step underflow");
  const auto n_cp = static_cast<std::size_t>(std::ceil(cfg.T / cfg.checkpoint_dt - 1e-9));
  const double seg = cfg.T / static_cast<double>(n_cp);
  const auto per_seg = static_cast<std::size_t>(std::ceil(seg / dt_max - 1e-9));
  const double dt = seg / static_cast<double>(per_seg);
  if (static_cast<double>(per_seg) * static_cast<double>(n_cp) > 5e9) fail(ErrorKind::Solver, "too many time steps");

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = p.w0.eval_xt(disc.nodes()[i], 0.0);
  auto set_bc = [&](std::vector<double>& v, double t) {
    if (!dirichlet) return;
    v.front() = dirichlet_value(p, t, Endpoint::Left);
    v.back() = dirichlet_value(p, t, Endpoint::Right);
  };
  set_bc(w, 0.0);
  if (!all_finite(w)) throw BlowUpError(0.0);

  Trajectory traj;
  traj.dt_used = dt;
  traj.times.reserve(n_cp + 1);
  traj.states.reserve(n_cp + 1);
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.emplace_back(p.x_lo, p.x_hi, w);
    traj.d_left.append(t, p.d_left.eval_xt(0.0, t));
    traj.d_right.append(t, p.d_right.eval_xt(0.0, t));
  };
  record(0.0);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t c = 0; c < n_cp; ++c) {
    const double t_seg = seg * static_cast<double>(c);
    for (std::size_t s = 0; s < per_seg; ++s) {
      const double t = t_seg + dt * static_cast<double>(s);
      disc.rhs(w, t, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * dt * k1[i];
      set_bc(tmp, t + 0.5 * dt);
      disc.rhs(tmp, t + 0.5 * dt, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * dt * k2[i];
      set_bc(tmp, t + 0.5 * dt);
      disc.rhs(tmp, t + 0.5 * dt, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + dt * k3[i];
      set_bc(tmp, t + dt);
      disc.rhs(tmp, t + dt, k4);
      for (std::size_t i = 0; i < n; ++i) w[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      set_bc(w, t + dt);
      if (!all_finite(w)) throw BlowUpError(t + dt);
      ++traj.steps;
    }
    record(c + 1 == n_cp ? cfg.T : seg * static_cast<double>(c + 1));
  }
  return traj;
}

GridFunction1D solve_weight_p(const Expr& a, const Expr& b, double p0, double x_lo, double x_hi, std::size_t n) {
  if (!(p0 >= 0.0)) fail(ErrorKind::Domain, "p0 must be >= 0");
  if (n < 3) fail(ErrorKind::Domain, "solve_weight_p needs n >= 3");
  if (!(x_lo < x_hi)) fail(ErrorKind::Domain, "solve_weight_p needs x_lo < x_hi");
  const double h = (x_hi - x_lo) / static_cast<double>(n - 1);
  const std::size_t m = n - 2;  // interior unknowns
  std::vector<double> lower(m), diag(m), upper(m), rhs(m, -p0 * h * h);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    const double x = GridFunction1D::node(x_lo, x_hi, n, i);
    const double am = a.eval_xt(x - 0.5 * h, 0.0);
    const double ap = a.eval_xt(x + 0.5 * h, 0.0);
    if (!(am > 0.0) || !(ap > 0.0)) fail(ErrorKind::Domain, "a must be > 0 for the weight problem");
    const double bi = b.eval_xt(x, 0.0);
    lower[k] = am - 0.5 * h * bi;
    diag[k] = -(am + ap);
    upper[k] = ap + 0.5 * h * bi;
  }
  // Thomas algorithm; boundary values are zero so no right-hand side corrections.
  for (std::size_t k = 1; k < m; ++k) {
    if (diag[k - 1] == 0.0) fail(ErrorKind::Solver, "singular tridiagonal system");
    const double f = lower[k] / diag[k - 1];
    diag[k] -= f * upper[k - 1];
    rhs[k] -= f * rhs[k - 1];
  }
  if (diag[m - 1] == 0.0) fail(ErrorKind::Solver, "singular tridiagonal system");
  std::vector<double> pv(n, 0.0);
  pv[m] = rhs[m - 1] / diag[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) pv[k + 1] = (rhs[k] - upper[k] * pv[k + 2]) / diag[k];
  for (double v : pv) {
    if (!std::isfinite(v)) fail(ErrorKind::Solver, "weight solve produced non-finite values");
    if (v < -1e-12) fail(ErrorKind::Solver, "weight p is negative; comparison principle violated");
  }
  for (double& v : pv) v = std::max(v, 0.0);
  return GridFunction1D(x_lo, x_hi, std::move(pv));
}

BoundaryPair boundary_derivatives(const GridFunction1D& p) {
  const auto& v = p.values();
  const std::size_t n = v.size();
  const double h = p.h();
  if (n < 3) return {(v[1] - v[0]) / h, (v[1] - v[0]) / h};
  return {(-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h), (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)};
}

EllipticSolution solve_elliptic_u(const Expr& Q, std::size_t n) {
  if (n < 3) fail(ErrorKind::Domain, "solve_elliptic_u needs n >= 3");
  const double h = 1.0 / static_cast<double>(n - 1);
  auto q = [&](double r) { return Q.eval(Env().set(Var::r, r)); };
  std::vector<double> qn(n), qh(n - 1);
  for (std::size_t i = 0; i < n; ++i) qn[i] = q(GridFunction1D::node(0.0, 1.0, n, i));
  for (std::size_t i = 0; i + 1 < n; ++i) qh[i] = q((static_cast<double>(i) + 0.5) * h);

  // v'' = -Q v, v(0) = e^sigma, v'(0) = 0. Returns v on the grid and v'(1).
  auto shoot = [&](double sigma, std::vector<double>* out) {
    double v = std::exp(sigma);
    double z = 0.0;
    if (out) (*out)[0] = v;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double k1v = z, k1z = -qn[i] * v;
      const double k2v = z + 0.5 * h * k1z, k2z = -qh[i] * (v + 0.5 * h * k1v);
      const double k3v = z + 0.5 * h * k2z, k3z = -qh[i] * (v + 0.5 * h * k2v);
      const double k4v = z + h * k3z, k4z = -qn[i + 1] * (v + h * k3v);
      v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      z += h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
      if (!(v > 0.0)) fail(ErrorKind::Domain, "solve_elliptic_u: v = e^{-u} reaches zero; Q admits no such transform");
      if (out) (*out)[i + 1] = v;
    }
    return std::pair{v, z};
  };
  auto residual = [&](double sigma) {
    const auto [v1, z1] = shoot(sigma, nullptr);
    return -z1 / v1 - std::log(v1);
  };

  double lo = -1.0;
  double hi = 1.0;
  double rlo = residual(lo);
  double rhi = residual(hi);
  while (rlo * rhi > 0.0) {
    lo *= 2.0;
    hi *= 2.0;
    if (hi > 700.0) fail(ErrorKind::Solver, "solve_elliptic_u: no sign change of the boundary residual in bracket");
    rlo = residual(lo);
    rhi = residual(hi);
  }
  double sigma = 0.5 * (lo + hi);
  double rs = residual(sigma);
  for (int it = 0; it < 200 && std::abs(rs) > 1e-13; ++it) {
    if ((rs > 0.0) == (rlo > 0.0)) {
      lo = sigma;
      rlo = rs;
    } else {
      hi = sigma;
    }
    const double next = 0.5 * (lo + hi);
    if (next == sigma) break;
    sigma = next;
    rs = residual(sigma);
  }
  if (std::abs(rs) > 1e-10) fail(ErrorKind::Solver, "solve_elliptic_u: shooting did not converge");

  std::vector<double> v(n);
  shoot(sigma, &v);
  std::vector<double> u(n);
  double u_inf = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = -std::log(v[i]);
    u_inf = std::max(u_inf, std::abs(u[i]));
  }
  return EllipticSolution{GridFunction1D(0.0, 1.0, std::move(u)), u_inf, rs, v[0]};
}

double estimate_cbar(const PdeProblem& p, std::size_t n_x, double T, std::size_t n_t) {
  const double dx = 1e-5 * p.length();
  double best = std::numeric_limits<double>::infinity();
  for (double t : sample_times(T, n_t)) {
    for (std::size_t i = 0; i < n_x; ++i) {
      const double x = GridFunction1D::node(p.x_lo, p.x_hi, n_x, i);
      const double bx = (p.b.eval_xt(x + dx, t) - p.b.eval_xt(x - dx, t)) / (2 * dx);
      best = std::min(best, p.c.eval_xt(x, t) - bx - p.mu.eval_xt(x, t));
    }
  }
  return best;
}

double estimate_psi0(const PdeProblem& p, std::size_t n_s, double T, std::size_t n_t) {
  if (p.boundary != BoundaryKind::Robin) fail(ErrorKind::Config, "psi0 is defined for Robin boundaries only");
  const auto mags = detail::logspace(1e-4, 1e3, std::max<std::size_t>(n_s, 2));
  double best = std::numeric_limits<double>::infinity();
  for (double t : sample_times(T, n_t)) {
    for (Endpoint e : {Endpoint::Left, Endpoint::Right}) {
      const double x = p.boundary_x(e);
      const double nu = e == Endpoint::Left ? -1.0 : 1.0;
      const double b = p.b.eval_xt(x, t);
      const double m = p.m.eval_xt(x, t);
      for (double mag : mags) {
        for (double s : {-mag, mag}) {
          const double num = p.psi.eval_xtw(x, t, s) + s * b * nu + p.g.eval_xtw(x, t, s) * m * nu;
          best = std::min(best, num / s);
        }
      }
    }
  }
  return best;
}

}  // namespace issv
