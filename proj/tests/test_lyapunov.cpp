#include <cmath>

#include "doctest.h"
#include "issv/errors.hpp"
#include "issv/lyapunov.hpp"

using namespace issv;
using doctest::Approx;

TEST_CASE("rho values") {
  CHECK(rho(1, 0) == 0.375);
  CHECK(rho_prime(1, 0) == 0.0);
  CHECK(rho(1, 1) == 1.0);
  CHECK(rho(1, 2) == 2.0);
  CHECK(rho(1, 0.5) == Approx(0.5546875).epsilon(1e-15));
  CHECK(rho(1, -0.5) == Approx(0.5546875).epsilon(1e-15));
  CHECK(rho_prime(1, -0.5) == -rho_prime(1, 0.5));
  CHECK(rho_second(2, 0) == Approx(0.75));
  CHECK_THROWS_AS(rho(0, 1), Error);
  CHECK_THROWS_AS(rho_prime(-1, 1), Error);
  CHECK_THROWS_AS(rho_second(0, 1), Error);
}

TEST_CASE("rho seam") {
  for (double tau : {1e-3, 0.3, 5.0}) {
    const double in = std::nextafter(tau, 0.0);
    CHECK(std::abs(rho(tau, in) - rho(tau, tau)) <= 1e-12 * tau);
    CHECK(std::abs(rho_prime(tau, in) - 1.0) <= 1e-12);
    CHECK(std::abs(rho_second(tau, in)) * tau <= 1e-12);
    CHECK(rho(tau, tau) - 3 * tau / 8 == Approx(5 * tau / 8));
    CHECK(rho_prime(tau, tau) * tau == rho(tau, tau));
  }
}

TEST_CASE("check_rho_properties") {
  for (double tau : {1e-4, 1e-2, 1.0, 7.5}) {
    const auto r = check_rho_properties(tau, 10000, 123);
    for (const auto& it : r.items) CHECK_MESSAGE(it.pass(), it.name << " slack " << it.worst_slack);
  }
  CHECK_THROWS_AS(check_rho_properties(0.0, 10, 1), Error);
}

TEST_CASE("functionals") {
  const auto zero = GridFunction1D::constant(0, 1, 11, 0.0);
  const auto one = GridFunction1D::constant(0, 1, 11, 1.0);
  CHECK(v_tau(zero, 0.2) == Approx(3 * 0.2 / 8));
  CHECK(v_tau(one, 0.5) == Approx(1.0));
  CHECK(v_tau_phi(YoungFunction::power(2), one, 0.5) == Approx(0.5));
  CHECK(v_tau_weighted(one, one, 0.5) == Approx(1.0));
  CHECK(v_tau_phi_weighted(YoungFunction::power(2), one.scaled(2), one, 0.5) == Approx(1.0));
  CHECK_THROWS_AS(v_tau(one, 0.0), Error);
  CHECK_THROWS_AS(v_tau_weighted(GridFunction1D::constant(0, 1, 5, 1.0), one, 0.1), Error);
}

TEST_CASE("sandwich and convergence") {
  const auto w = GridFunction1D::sample(-1, 2, 301, [](double x) { return std::sin(5 * x) * x; });
  const double l1 = l1_norm(w);
  const double len = w.length();
  double prev = 1e300;
  for (double tau : {1e-1, 1e-2, 1e-3}) {
    const double v = v_tau(w, tau);
    CHECK(v >= std::max(3 * tau / 8 * len, l1) - 1e-14);
    CHECK(v <= l1 + 3 * tau / 8 * len + 1e-14);
    CHECK(v - l1 <= prev);
    prev = v - l1;
  }
}
