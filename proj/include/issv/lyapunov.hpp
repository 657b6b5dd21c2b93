#pragma once

// The C^2 smoothing rho_tau of |s| and the approximate Lyapunov functionals built on it.

#include <cstdint>

#include "issv/norms.hpp"
#include "issv/young.hpp"

namespace issv {

/// |s| outside (-tau, tau); the quartic -s^4/(8 tau^3) + 3 s^2/(4 tau) + 3 tau/8 inside.
double rho(double tau, double s);
double rho_prime(double tau, double s);
double rho_second(double tau, double s);

/// Samples (tau, s) and checks the ordering chain
/// 0 <= rho - 3tau/8 <= rho' s <= rho <= |s| + 3tau/8, plus |s| <= rho, |rho'| <= 1, rho'' >= 0,
/// and C^2 agreement across the seam.
CheckReport check_rho_properties(double tau, std::size_t n_samples, std::uint64_t seed);

/// int rho(w), int p rho(w), int Phi(rho(w)), int p Phi(rho(w)).
double v_tau(const GridFunction1D& w, double tau);
double v_tau_weighted(const GridFunction1D& p, const GridFunction1D& w, double tau);
double v_tau_phi(const YoungFunction& y, const GridFunction1D& w, double tau);
double v_tau_phi_weighted(const YoungFunction& y, const GridFunction1D& p, const GridFunction1D& w, double tau);

}  // namespace issv
