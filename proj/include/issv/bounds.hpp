#pragma once

// Right-hand sides of the ISS / iISS estimates, evaluated at every checkpoint
// of the disturbance series (prefix time norms over (0, T_k)).

#include <string>
#include <vector>

#include "issv/expr.hpp"
#include "issv/norms.hpp"
#include "issv/young.hpp"

namespace issv {

/// (1/(c q'))^{1/q'} with q' = q/(q-1); 1 at q = 1 and 1/c at q = inf.
double holder_factor(double cbar, double q);

/// Space-reduced data of one run. `d_series` holds the boundary quantity
/// summed over both endpoints (counting measure), `f_series` the in-domain one.
/// Which norm each carries depends on the estimate being evaluated.
struct BoundInputs {
  double q = 1.0;
  double w0_norm = 0.0;
  TimeSeries d_series;
  TimeSeries f_series;
};

TimeSeries thm31_l1_estimate(const BoundInputs& in, double cbar);
TimeSeries thm31_lq_iss(const BoundInputs& in, double cbar);

enum class GainRoute { Psi0, M };

struct GainParams {
  double l = 1.0;
  double k = 1.0;
  double b_under = 0.0;
  double a_bar = 1.0;
  double a_under = 1.0;
  double dd = 1.0;  // max |x| over the boundary
  double psi0_under = 0.0;
  double m_bar = 0.0;
  GainRoute route = GainRoute::Psi0;
  // Dirichlet variant: the psi0 floor becomes 2 a_bar l e^{l dd} p_max / p0.
  bool dirichlet = false;
  double p0 = 0.0;
  double p_max = 0.0;
};

struct Gains {
  double chat = 0.0;
  double ckl = 0.0;
};

/// Largest lower bound on k for the given l (throws if l itself is inadmissible).
double gain_k_floor(const GainParams& gp);
Gains gains(const GainParams& gp);
double gain_objective(const Gains& g, double q);

struct GainSearch {
  double b_under = 0.0;
  double a_bar = 1.0;
  double a_under = 1.0;
  double dd = 1.0;
  double psi0_under = 0.0;
  double m_bar = 0.0;
  double q = 1.0;
  bool psi0_route = true;  // the sign condition on m g s holds
  bool m_route = true;
  bool dirichlet = false;
  double p0 = 0.0;
  double p_max = 0.0;
};

/// Grid search over l and k = margin * floor minimizing C_{k,l} holder_factor(chat, q).
GainParams pick_gains(const GainSearch& s);

TimeSeries thm31ii_lq_iss(const BoundInputs& in, const GainParams& gp);

/// Boundary data for the Dirichlet estimates.
struct DirichletData {
  double x_lo = 0.0;
  double x_hi = 1.0;
  Expr a;
  Expr psi1;
  Expr psi2;
  TimeSeries d_left;
  TimeSeries d_right;
  BoundaryPair p_prime_abs;
};

/// sum over endpoints of a |psi2^{-1}(d/psi1)| |p'|.
TimeSeries dirichlet_flux_series(const DirichletData& dd);
/// sum over endpoints of a Phi(psi2^{-1}(|d|/psi1)) |p'|.
TimeSeries dirichlet_modular_series(const DirichletData& dd, const YoungFunction& y);

/// in.w0_norm = ||p w0||_1, in.f_series = ||p f||_1; in.d_series is ignored.
/// q = 1 with cbar >= 0 uses unit factors; otherwise cbar > 0 is required.
TimeSeries thm32_weighted_dirichlet(const BoundInputs& in, double cbar, const DirichletData& dd);
TimeSeries thm32ii_weighted_dirichlet(const BoundInputs& in, const GainParams& gp, const DirichletData& dd);

/// 2 max_i [ (1/c) delta1^2/(delta0 (1+delta1)) Phi~(1) ]^{1/(1+delta_i)}.
double thm41_constant(double cbar, const YoungFunction& y);
/// d_series and f_series carry L1-in-space values; their time Luxemburg norms are taken here.
TimeSeries thm41_lphi_iss(const BoundInputs& in, double cbar, const YoungFunction& y);
/// Weighted Dirichlet analogue; boundary series from dirichlet_flux_series.
TimeSeries thm42_lphi_dirichlet(const BoundInputs& in, double cbar, const YoungFunction& y, const DirichletData& dd);

/// 0.5 min{ ((1+delta0)/delta1) psi0, cbar (1+delta0) }.
double default_kphi_eps(double cbar, double psi0_under, const YoungFunction& y);

struct KPhiBound {
  double eps = 0.0;
  double lambda = 0.0;
  double c_eps = 0.0;
  TimeSeries modular;  // bound on the modular of w(T)
  TimeSeries norm;     // Luxemburg-norm corollary via the sandwich
};

/// in.w0_norm = modular of w0; d_series = Phi(|d|) summed over endpoints; f_series = int Phi(|f|).
KPhiBound thm43_kphi_iss(const BoundInputs& in, double cbar, const YoungFunction& y, double eps, double psi0_under);

/// in.w0_norm = int p Phi(|w0|); f_series from weighted_f_modular. Requires 0 < eps < cbar (1+delta0).
KPhiBound thm44_weighted_kphi(const BoundInputs& in, double cbar, const YoungFunction& y, double eps,
                              const DirichletData& dd);

/// int max_i |p|^{1+delta_i} Phi(|f|) dx.
double weighted_f_modular(const YoungFunction& y, const GridFunction1D& p, const GridFunction1D& f);

/// e^{u_inf} (e^{-cbar T} ||w0||_1 + ||d||_{L1} + ||f||_{L1 L1}); cbar must exceed max(cbar_floor, 0).
TimeSeries prop51_sign_changing(const BoundInputs& in, double cbar_chosen, double u_inf, double cbar_floor);

struct ValidityItem {
  std::string name;
  double value = 0.0;
  bool ok = false;
};

struct Robin52Inputs {
  double w0_weighted = 0.0;  // int beta |w0|
  TimeSeries d0;             // raw signal at x = 0
  TimeSeries d1;             // raw signal at x = 1
  TimeSeries f_weighted_sup;  // sup_x beta |f| at each time
};

struct Robin52Result {
  std::vector<ValidityItem> validity;
  bool valid = false;
  double cbar = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;
  TimeSeries bound;  // empty unless valid
};

/// beta(x) = e^{-b x/(2a)} cos(theta x).
double robin52_beta(double a, double b, double theta, double x);
Robin52Result robin_weighted_52(double a, double b, double c, double theta, double K, const Robin52Inputs& in);

}  // namespace issv
