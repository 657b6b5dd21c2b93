#pragma once

// Method-of-lines solver for
//   w_t = (a w_x)_x - b w_x - c w - h(x,t,w,w_x) - m (g(x,t,w))_x + f
// on (x_lo, x_hi) with Robin  a dw/dnu + psi(x,t,w) = d  or Dirichlet
// psi1(x,t) psi2(w) = d  boundary conditions, plus the auxiliary elliptic
// solvers for the weight p and the transform u.

#include <cstddef>
#include <vector>

#include "issv/expr.hpp"
#include "issv/norms.hpp"

namespace issv {

enum class BoundaryKind { Robin, Dirichlet };
enum class Advection { Central, Upwind };
enum class Endpoint { Left, Right };

/// Variables each coefficient slot may reference.
namespace slots {
inline constexpr VarSet kField{Var::x, Var::t};          // a b c mu m f g0 psi1
inline constexpr VarSet kReaction{Var::x, Var::t, Var::w, Var::wx};  // h
inline constexpr VarSet kFlux{Var::x, Var::t, Var::w};   // g, psi
inline constexpr VarSet kPsi2{Var::s};
inline constexpr VarSet kSignal{Var::t};                 // d_left, d_right
inline constexpr VarSet kInitial{Var::x};                // w0
inline constexpr VarSet kRadial{Var::r};                 // Q
}  // namespace slots

struct PdeProblem {
  double x_lo = 0.0;
  double x_hi = 1.0;

  Expr a = Expr::constant(1.0);
  Expr b, c, mu, m, f;
  Expr h;   // h(x,t,w,wx)
  Expr g;   // g(x,t,w)
  Expr g0;  // envelope |g| <= |g0| |w| for |w| <= s0

  BoundaryKind boundary = BoundaryKind::Robin;
  Expr psi;                            // Robin: psi(x,t,w)
  Expr psi1 = Expr::constant(1.0);     // Dirichlet: psi1(x,t)
  Expr psi2 = Expr::parse("s", slots::kPsi2);  // Dirichlet: psi2(s), strictly increasing
  Expr d_left, d_right;                // d(t) at each endpoint
  Expr w0;

  // Declared structural constants.
  double cbar = 0.0;
  double psi0bar = 0.0;
  double s0 = 1.0;

  double length() const noexcept { return x_hi - x_lo; }
  double boundary_x(Endpoint e) const noexcept { return e == Endpoint::Left ? x_lo : x_hi; }
  const Expr& d(Endpoint e) const noexcept { return e == Endpoint::Left ? d_left : d_right; }
};

struct SolverConfig {
  std::size_t n_x = 201;
  double T = 1.0;
  double cfl_safety = 0.4;
  Advection advection = Advection::Central;
  double checkpoint_dt = 0.01;
};

struct Trajectory {
  std::vector<double> times;            // checkpoint times, 0 .. T
  std::vector<GridFunction1D> states;   // state at each checkpoint
  TimeSeries d_left;                    // d at each checkpoint time
  TimeSeries d_right;
  double dt_used = 0.0;
  std::size_t steps = 0;

  std::size_t size() const noexcept { return times.size(); }
};

/// dw/dt at every node; Dirichlet boundary nodes get 0.
GridFunction1D semidiscrete_rhs(const PdeProblem& p, const GridFunction1D& w, double t,
                                Advection adv = Advection::Central);

/// Ghost value beyond a Robin endpoint from a (w_ghost - w_inner)/(2h) + psi(w_b) = d.
double apply_robin_ghost(const PdeProblem& p, const GridFunction1D& w, double t, Endpoint e);

/// s with psi2(s) = y, by bisection with geometric bracket growth in both directions.
double psi2_invert(const Expr& psi2, double y);

/// Dirichlet trace psi2^{-1}(d / psi1) at an endpoint.
double dirichlet_value(const PdeProblem& p, double t, Endpoint e);

/// Time step from the diffusive and advective limits, before checkpoint alignment.
double stable_dt(const PdeProblem& p, const SolverConfig& cfg);

/// Classic RK4 with checkpoints every checkpoint_dt (the last interval is
/// shortened to land on T).
Trajectory integrate(const PdeProblem& p, const SolverConfig& cfg);

/// Solves (a p')' + b p' = -p0 with p = 0 at both ends; a and b are sampled at t = 0.
GridFunction1D solve_weight_p(const Expr& a, const Expr& b, double p0, double x_lo, double x_hi, std::size_t n);

/// One-sided second-order derivative at both ends.
BoundaryPair boundary_derivatives(const GridFunction1D& p);

struct EllipticSolution {
  GridFunction1D u;
  double u_inf = 0.0;     // max |u|
  double residual = 0.0;  // -v'(1)/v(1) - ln v(1) at the returned v(0)
  double v0 = 0.0;
};

/// u_rr = u_r^2 + Q(r), u_r(0) = 0, u_r(1) + u(1) = 0 on [0, 1], via v = e^{-u}.
EllipticSolution solve_elliptic_u(const Expr& Q, std::size_t n);

/// min over space-time samples of c - b_x - mu.
double estimate_cbar(const PdeProblem& p, std::size_t n_x, double T, std::size_t n_t);

/// min over boundary-time samples and log-spaced s != 0 of (psi + s b nu + g m nu)/s.
double estimate_psi0(const PdeProblem& p, std::size_t n_s, double T, std::size_t n_t);

}  // namespace issv
