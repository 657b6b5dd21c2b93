#include <cmath>

#include "doctest.h"
#include "issv/errors.hpp"
#include "issv/young.hpp"

using issv::YoungFunction;
using doctest::Approx;

namespace {
const double kLn2 = std::log(2.0);
}

TEST_CASE("phi catalog values") {
  CHECK(YoungFunction::power(2).phi(3) == Approx(3.0).epsilon(1e-15));
  CHECK(YoungFunction::power(3).phi(2) == Approx(4.0).epsilon(1e-15));
  CHECK(YoungFunction::log_linear(1, 1).phi(1) == Approx(1.6931471805599453).epsilon(1e-14));
  CHECK(YoungFunction::log_linear(1, 1).phi(0) == 0.0);
  CHECK(YoungFunction::log_power(std::exp(1.0), 1, 2).phi(0) == 0.0);
  CHECK_THROWS_AS(YoungFunction::power(2).phi(-1), issv::Error);
}

TEST_CASE("catalog parameter validation") {
  CHECK_THROWS_AS(YoungFunction::power(1.0), issv::Error);
  CHECK_THROWS_AS(YoungFunction::log_linear(0, 1), issv::Error);
  CHECK_THROWS_AS(YoungFunction::log_power(2.0, 1, 2), issv::Error);
}

TEST_CASE("phi_inv") {
  CHECK(YoungFunction::power(3).phi_inv(4) == Approx(2.0).epsilon(1e-14));
  CHECK(YoungFunction::log_linear(1, 1).phi_inv(0) == 0.0);
  CHECK(YoungFunction::log_linear(1, 1).phi_inv(1.0 + kLn2) == Approx(1.0).epsilon(1e-10));
  const auto lp = YoungFunction::log_power(3.0, 0.5, 2.5);
  for (double s : {1e-5, 0.3, 7.0, 900.0}) CHECK(lp.phi(lp.phi_inv(lp.phi(s))) == Approx(lp.phi(s)).epsilon(1e-10));
  CHECK_THROWS_AS(YoungFunction::power(2).phi_inv(-0.1), issv::Error);
}

TEST_CASE("phi_inv overflow on unbounded target") {
  const auto y = YoungFunction::log_linear(1, 1);
  try {
    (void)y.phi_inv(1e305);
    FAIL("expected overflow");
  } catch (const issv::Error& e) {
    CHECK(e.kind() == issv::ErrorKind::Overflow);
  }
}

TEST_CASE("big_phi") {
  CHECK(YoungFunction::power(2).big_phi(2) == Approx(2.0).epsilon(1e-15));
  CHECK(YoungFunction::log_linear(1, 1).big_phi(0) == 0.0);
  CHECK(YoungFunction::log_linear(1, 1).big_phi(1) == Approx(2 * kLn2 - 0.5).epsilon(1e-10));
  CHECK_THROWS_AS(YoungFunction::power(2).big_phi(-1), issv::Error);
}

TEST_CASE("big_phi_tilde") {
  CHECK(YoungFunction::power(2).big_phi_tilde(1) == Approx(0.5).epsilon(1e-15));
  CHECK(YoungFunction::power(3).big_phi_tilde(1) == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(YoungFunction::log_linear(1, 1).big_phi_tilde(0) == 0.0);
  // Legendre identity for a non-power family: Phi~(phi(1)) = phi(1) - Phi(1).
  const auto y = YoungFunction::log_linear(1, 1);
  CHECK(y.big_phi_tilde(1.0 + kLn2) == Approx((1.0 + kLn2) - (2 * kLn2 - 0.5)).epsilon(1e-9));
}

TEST_CASE("tolksdorf_bounds") {
  auto e = issv::tolksdorf_bounds(YoungFunction::power(3), 1e-3, 1e3, 100);
  CHECK(e.delta0 == Approx(2.0).epsilon(1e-12));
  CHECK(e.delta1 == Approx(2.0).epsilon(1e-12));
  e = issv::tolksdorf_bounds(YoungFunction::power(1.5), 1e-2, 10, 7);
  CHECK(e.delta0 == Approx(0.5).epsilon(1e-12));
  CHECK(e.delta1 == Approx(0.5).epsilon(1e-12));
  e = issv::tolksdorf_bounds(YoungFunction::log_linear(1, 1), 1e-4, 1e4, 400);
  CHECK(e.delta0 > 0.0);
  CHECK(e.delta0 <= e.delta1);
  CHECK(e.delta1 <= 1.0);
  CHECK_THROWS_AS(issv::tolksdorf_bounds(YoungFunction::power(2), 1.0, 0.5, 10), issv::Error);
  CHECK_THROWS_AS(issv::tolksdorf_bounds(YoungFunction::power(2), 0.0, 1.0, 10), issv::Error);
  CHECK_THROWS_AS(issv::tolksdorf_bounds(YoungFunction::power(2), 0.1, 1.0, 1), issv::Error);
}

TEST_CASE("exponents stored on construction") {
  const auto p = YoungFunction::power(2.5);
  CHECK(p.delta0() == 1.5);
  CHECK(p.delta1() == 1.5);
  const auto y = YoungFunction::log_linear(1, 1);
  const auto raw = issv::tolksdorf_bounds(y, 1e-6, y.s_max(), 2000);
  CHECK(y.delta0() == Approx(0.99 * raw.delta0));
  CHECK(y.delta1() == Approx(1.01 * raw.delta1));
}

TEST_CASE("young_eps_constant") {
  CHECK(issv::young_eps_constant(1, 1, 0.5) == Approx(2.0).epsilon(1e-14));
  CHECK(issv::young_eps_constant(1, 1, 0.1) == Approx(10.0).epsilon(1e-14));
  CHECK(issv::young_eps_constant(1, 2, 0.5) == Approx(2.7734450974).epsilon(1e-9));
  CHECK(issv::young_eps_constant(1, 1, 1.0) == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(issv::young_eps_constant(1, 1, 0.0), issv::Error);
  CHECK_THROWS_AS(issv::young_eps_constant(1, 1, 1.5), issv::Error);
  CHECK_THROWS_AS(issv::young_eps_constant(1, 2, -0.1), issv::Error);
}

TEST_CASE("corrected eps-Young constant") {
  for (double eps : {0.01, 0.3, 1.0})
    CHECK(issv::young_eps_constant_corrected(1.5, 1.5, eps) ==
          Approx(issv::young_eps_constant(1.5, 1.5, eps)).epsilon(1e-14));
  // 4/3 * (1/3)^{-1}
  CHECK(issv::young_eps_constant_corrected(1, 2, 0.5) == Approx(4.0).epsilon(1e-14));
  for (double eps : {1e-3, 0.1, 0.9, 1.5})
    CHECK(issv::young_eps_constant_corrected(0.5, 2, eps) >= issv::young_eps_constant(0.5, 2, eps));
  CHECK_THROWS_AS(issv::young_eps_constant_corrected(1, 1, 1.5), issv::Error);

  // delta0 < delta1, small a: the uncorrected constant is too small here
  const auto y = issv::YoungFunction::log_power(std::exp(1.0), 1.0, 2.0);
  const double a = 1e-3, b = 1.26e-5, eps = 0.01;
  CHECK(a * b > eps * y.big_phi(a) + issv::young_eps_constant(y, eps) * y.big_phi_tilde(b));
  CHECK(a * b <= eps * y.big_phi(a) + issv::young_eps_constant_corrected(y, eps) * y.big_phi_tilde(b));
}

TEST_CASE("weighted Young inequality on a 100x100 grid with delta0=1, delta1=2") {
  // Phi with exactly these exponents is not in the catalog; use Phi(s) = s^2/2 + s^3/3
  // (ratio s phi'/phi ranges over [1,2]) with Phi~ computed by Legendre transform.
  const double eps = 0.5;
  const double C = issv::young_eps_constant(1, 2, eps);
  auto phi = [](double s) { return s + s * s; };
  auto Phi = [](double s) { return s * s / 2 + s * s * s / 3; };
  auto phi_inv = [](double y) { return (-1 + std::sqrt(1 + 4 * y)) / 2; };
  auto Phi_t = [&](double y) {
    const double s = phi_inv(y);
    return s * phi(s) - Phi(s);
  };
  double worst = 1e300;
  for (int i = 1; i <= 100; ++i)
    for (int j = 1; j <= 100; ++j) {
      const double a = 0.05 * i;
      const double b = 0.2 * j;
      worst = std::min(worst, eps * Phi(a) + C * Phi_t(b) - a * b);
    }
  CHECK(worst >= -1e-12);
}

TEST_CASE("check_lemma_phi on power is exact") {
  const auto r = issv::check_lemma_phi(YoungFunction::power(2), 500, 7);
  CHECK(r.pass());
  for (const auto& it : r.items) {
    CHECK(it.samples > 0);
    if (it.equality_for_power) CHECK(std::abs(it.worst_slack) <= 1e-12);
  }
}

TEST_CASE("check_lemma_phi on log-linear") {
  const auto r = issv::check_lemma_phi(YoungFunction::log_linear(1, 1), 1000, 11);
  for (const auto& it : r.items) CHECK_MESSAGE(it.pass(), it.name << " slack " << it.worst_slack);
}

TEST_CASE("check_lemma_phi on log-power") {
  const auto r = issv::check_lemma_phi(YoungFunction::log_power(std::exp(1.0), 1, 2), 300, 3);
  for (const auto& it : r.items) CHECK_MESSAGE(it.pass(), it.name << " slack " << it.worst_slack);
}

TEST_CASE("check_lemma_inv") {
  for (const auto& y : {YoungFunction::power(2), YoungFunction::power(3), YoungFunction::log_linear(1, 1),
                        YoungFunction::log_power(3.0, 0.5, 2.5)}) {
    const auto r = issv::check_lemma_inv(y, 300, 5);
    for (const auto& it : r.items) {
      CHECK_MESSAGE(it.pass(), y.name() << " " << it.name << " slack " << it.worst_slack);
      if (y.is_power() && it.equality_for_power) CHECK_MESSAGE(std::abs(it.worst_slack) <= 1e-10, it.name);
    }
  }
}

TEST_CASE("lemma inverse (iii) equality for power q=2") {
  const auto y = YoungFunction::power(2);
  for (double s : {0.1, 1.0, 4.0}) CHECK(y.big_phi_tilde(y.phi(s)) == Approx(y.big_phi(s)).epsilon(1e-14));
  const auto y3 = YoungFunction::power(3);
  CHECK(y3.big_phi_tilde(y3.phi(1)) == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(1.0 * y3.phi(1) - y3.big_phi(1) == Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("young inequality suite") {
  for (const auto& y : {YoungFunction::power(1.5), YoungFunction::power(4), YoungFunction::log_linear(2, 0.5),
                        YoungFunction::log_power(std::exp(1.0), 2, 1.8)}) {
    const auto r = issv::check_young_inequalities(y, 200, 99);
    for (const auto& it : r.items) CHECK_MESSAGE(it.pass(), y.name() << " " << it.name << " slack " << it.worst_slack);
  }
}

TEST_CASE("conjugate swaps roles") {
  const auto y = YoungFunction::power(3);
  const auto c = y.conjugate();
  CHECK(c.is_conjugate());
  CHECK(c.delta0() == Approx(0.5));
  CHECK(c.delta1() == Approx(0.5));
  CHECK(c.big_phi(1) == Approx(y.big_phi_tilde(1)));
  CHECK(c.phi(4) == Approx(2.0));
  CHECK(c.conjugate().big_phi(2) == Approx(y.big_phi(2)));
  const auto ll = YoungFunction::log_linear(1, 1).conjugate();
  CHECK(ll.delta0() <= ll.delta1());
  const auto r = issv::check_lemma_phi(ll, 100, 1);
  for (const auto& it : r.items) CHECK_MESSAGE(it.pass(), it.name << " slack " << it.worst_slack);
}

TEST_CASE("check reports are deterministic per seed") {
  const auto a = issv::check_lemma_phi(YoungFunction::log_linear(1, 1), 50, 42);
  const auto b = issv::check_lemma_phi(YoungFunction::log_linear(1, 1), 50, 42);
  REQUIRE(a.items.size() == b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) CHECK(a.items[i].worst_slack == b.items[i].worst_slack);
  CHECK_THROWS_AS(issv::check_lemma_phi(YoungFunction::power(2), 0, 1), issv::Error);
}
