#include <cmath>
#include <sstream>

#include "doctest.h"
#include "issv/errors.hpp"
#include "issv/norms.hpp"
#include "numeric.hpp"

using namespace issv;
using doctest::Approx;

namespace {
GridFunction1D on01(std::size_t n, double (*f)(double)) { return GridFunction1D::sample(0.0, 1.0, n, f); }
TimeSeries series(double T, std::size_t n, double (*f)(double)) {
  TimeSeries g;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = T * static_cast<double>(k) / static_cast<double>(n - 1);
    g.append(t, f(t));
  }
  return g;
}
}  // namespace

TEST_CASE("grid function construction") {
  CHECK_THROWS_AS(GridFunction1D(1.0, 0.0, {1, 2}), Error);
  CHECK_THROWS_AS(GridFunction1D(0.0, 1.0, {1}), Error);
  CHECK_THROWS_AS(GridFunction1D(0.0, 1.0, {1, NAN}), Error);
  const auto w = GridFunction1D::constant(0, 2, 5, 1.0);
  CHECK(w.h() == 0.5);
  CHECK(w.x(4) == 2.0);
}

TEST_CASE("trapezoid_integral") {
  for (std::size_t n : {2u, 3u, 17u}) {
    CHECK(trapezoid_integral(GridFunction1D::constant(0, 1, n, 1.0)) == Approx(1.0).epsilon(1e-15));
    CHECK(trapezoid_integral(on01(n, [](double x) { return x; })) == Approx(0.5).epsilon(1e-15));
  }
  CHECK(std::abs(trapezoid_integral(on01(101, [](double x) { return x * x; })) - 1.0 / 3.0) <= 2e-5);
}

TEST_CASE("l1 and weighted l1") {
  CHECK(l1_norm(GridFunction1D::constant(0, 1, 11, -2.0)) == Approx(2.0));
  CHECK(l1_norm(GridFunction1D::constant(0, 1, 11, 0.0)) == 0.0);
  const auto p = on01(201, [](double x) { return x * (1 - x); });
  CHECK(std::abs(weighted_l1_norm(p, GridFunction1D::constant(0, 1, 201, 1.0)) - 1.0 / 6.0) <= 1e-5);
  CHECK_THROWS_AS(weighted_l1_norm(p, GridFunction1D::constant(0, 1, 11, 1.0)), Error);
  CHECK_THROWS_AS(weighted_l1_norm(GridFunction1D::constant(0, 1, 11, -1.0), GridFunction1D::constant(0, 1, 11, 1.0)),
                  Error);
  try {
    weighted_l1_norm(p, GridFunction1D::constant(0, 1, 11, 1.0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Shape);
  }
}

TEST_CASE("orlicz_modular") {
  const auto y = YoungFunction::power(2);
  CHECK(orlicz_modular(y, GridFunction1D::constant(0, 1, 11, 1.0)) == Approx(0.5));
  CHECK(std::abs(orlicz_modular(y, on01(201, [](double x) { return x; })) - 1.0 / 6.0) <= 1e-5);
  CHECK(orlicz_modular(y, GridFunction1D::constant(0, 1, 11, 0.0)) == 0.0);
}

TEST_CASE("luxemburg_norm") {
  const auto y = YoungFunction::power(2);
  const auto one = GridFunction1D::constant(0, 1, 11, 1.0);
  CHECK(luxemburg_norm(y, one) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(luxemburg_norm(y, GridFunction1D::constant(0, 1, 11, 0.0)) == 0.0);
  CHECK(luxemburg_norm(y, one.scaled(3)) == Approx(3.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("luxemburg closed form for power") {
  detail::Rng rng(3);
  for (double q : {1.3, 2.0, 3.5}) {
    const auto y = YoungFunction::power(q);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> v(41);
      for (auto& e : v) e = rng.uniform(-5, 5);
      const GridFunction1D u(0, 2, v);
      const double oracle = std::pow(trapezoid_integral(u.map([q](double, double s) { return std::pow(std::abs(s), q); })) / q, 1.0 / q);
      CHECK(luxemburg_norm(y, u) == Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("luxemburg norm axioms on random data") {
  detail::Rng rng(17);
  for (const auto& y : {YoungFunction::power(1.7), YoungFunction::log_linear(1, 1)}) {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> a(31), b(31);
      for (auto& e : a) e = rng.uniform(-3, 3);
      for (auto& e : b) e = rng.uniform(-3, 3);
      const GridFunction1D u(0, 1, a);
      const GridFunction1D v(0, 1, b);
      const double nu = luxemburg_norm(y, u);
      const double lambda = rng.uniform(-4, 4);
      CHECK(luxemburg_norm(y, u.scaled(lambda)) == Approx(std::abs(lambda) * nu).epsilon(1e-9));
      const GridFunction1D sum = u.map([&](double x, double s) { return s + v[static_cast<std::size_t>(std::lround(x * 30))]; });
      CHECK(nu + luxemburg_norm(y, v) - luxemburg_norm(y, sum) >= -1e-9 * nu);
      CHECK(orlicz_modular(y, u.scaled(1.0 / nu)) <= 1.0 + 1e-9);
      CHECK(nu > 0.0);
    }
  }
}

TEST_CASE("time norms") {
  const auto one2 = series(2, 21, [](double) { return 1.0; });
  CHECK(time_lq_norm(one2, 1) == Approx(2.0));
  CHECK(time_lq_norm(one2, HUGE_VAL) == 1.0);
  CHECK(std::abs(time_lq_norm(series(1, 1001, [](double t) { return t; }), 2) - 1.0 / std::sqrt(3.0)) <= 1e-5);
  CHECK_THROWS_AS(time_lq_norm(one2, 0.5), Error);
  const auto g = series(3, 31, [](double t) { return std::sin(3 * t); });
  for (double q : {1.0, 2.0, HUGE_VAL}) {
    const auto pre = time_lq_norm_prefix(g, q);
    for (std::size_t k = 1; k < pre.size(); ++k) CHECK(pre[k] >= pre[k - 1]);
    CHECK(pre.back() == time_lq_norm(g, q));
  }
}

TEST_CASE("time series validation") {
  TimeSeries g;
  CHECK_THROWS_AS(g.append(0.5, 1), Error);
  g.append(0, 1);
  CHECK_THROWS_AS(g.append(0, 1), Error);
  CHECK_THROWS_AS(TimeSeries({0, 1}, {1}), Error);
}

TEST_CASE("time series csv round trip") {
  const auto g = series(1, 5, [](double t) { return std::exp(t) / 3; });
  std::stringstream ss;
  g.write_csv(ss);
  CHECK(ss.str().rfind("t,value\n", 0) == 0);
  const auto back = TimeSeries::read_csv(ss);
  REQUIRE(back.size() == g.size());
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(back.values()[k] == g.values()[k]);
}

TEST_CASE("time_luxemburg_norm") {
  const auto y = YoungFunction::power(2);
  CHECK(time_luxemburg_norm(y, series(1, 11, [](double) { return 1.0; })) == Approx(1 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(time_luxemburg_norm(y, series(1, 11, [](double) { return 0.0; })) == 0.0);
  CHECK(time_luxemburg_norm(y, series(4, 11, [](double) { return 1.0; })) == Approx(std::sqrt(2.0)).epsilon(1e-10));
  const auto pre = time_luxemburg_norm_prefix(y, series(4, 11, [](double) { return 1.0; }));
  for (std::size_t k = 1; k < pre.size(); ++k) CHECK(pre[k] >= pre[k - 1]);
}

TEST_CASE("holder_orlicz_check") {
  const auto y = YoungFunction::power(2);
  const auto zero = GridFunction1D::constant(0, 1, 11, 0.0);
  CHECK(holder_orlicz_check(y, zero, zero) == 0.0);
  const auto one = GridFunction1D::constant(0, 1, 11, 1.0);
  CHECK(holder_orlicz_check(y, one, one) == Approx(0.0).epsilon(1e-10).scale(1));
  detail::Rng rng(8);
  for (const auto& yy : {YoungFunction::power(3), YoungFunction::log_linear(1, 1)}) {
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> a(21), b(21);
      for (auto& e : a) e = rng.uniform(-2, 2);
      for (auto& e : b) e = rng.uniform(-2, 2);
      CHECK(holder_orlicz_check(yy, GridFunction1D(0, 1, a), GridFunction1D(0, 1, b)) >= -1e-9);
    }
  }
  CHECK_THROWS_AS(holder_orlicz_check(y, one, GridFunction1D::constant(0, 1, 5, 1.0)), Error);
}

TEST_CASE("luxemburg_sandwich_check") {
  detail::Rng rng(21);
  std::vector<double> a(201);
  for (auto& e : a) e = rng.uniform(-4, 4);
  const GridFunction1D u(0, 1, a);
  for (double q : {1.5, 2.0, 4.0}) {
    const auto [lo, hi] = luxemburg_sandwich_check(YoungFunction::power(q), u);
    CHECK(std::abs(lo) <= 1e-10 * luxemburg_norm(YoungFunction::power(q), u));
    CHECK(std::abs(hi) <= 1e-10 * luxemburg_norm(YoungFunction::power(q), u));
  }
  const auto [z0, z1] = luxemburg_sandwich_check(YoungFunction::power(2), GridFunction1D::constant(0, 1, 5, 0.0));
  CHECK(z0 == 0.0);
  CHECK(z1 == 0.0);
  const auto [l0, l1] = luxemburg_sandwich_check(YoungFunction::log_linear(1, 1), u);
  CHECK(l0 >= -1e-9);
  CHECK(l1 >= -1e-9);
}

TEST_CASE("boundary l1 uses counting measure") {
  CHECK(boundary_l1({-1.5, 2.0}) == 3.5);
}
