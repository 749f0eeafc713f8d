#include <doctest.h>

#include <cmath>

#include "rankinlab/quad.hpp"

using namespace rankinlab;

TEST_CASE("integrate trivial cases") {
  QuadConfig cfg;
  auto z = integrate([](double) { return 0.0; }, {0.0, 1.0}, cfg);
  CHECK(z.value == 0.0);
  auto r = integrate([](double x) { return x; }, {0.0, 1.0}, cfg);
  CHECK(std::abs(r.value - 0.5) <= r.abs_err + 1e-16);
}

TEST_CASE("infinite domain with envelope") {
  Domain d{0.0, std::numeric_limits<double>::infinity(), {DecayEnvelope::Kind::exponential, 1.0, 1.0}};
  auto r = integrate([](double x) { return std::exp(-x); }, d, QuadConfig{});
  CHECK(std::abs(r.value - 1.0) < 1e-10);
  CHECK(std::abs(r.value - 1.0) <= r.abs_err);
  Domain alg{1.0, std::numeric_limits<double>::infinity(), {DecayEnvelope::Kind::algebraic, 1.0, 3.0}};
  QuadConfig c2;
  c2.abs_tol = 1e-9;
  auto s = integrate([](double x) { return std::pow(x, -3.0); }, alg, c2);
  CHECK(std::abs(s.value - 0.5) <= s.abs_err);
  Domain bad{0.0, std::numeric_limits<double>::infinity(), {}};
  CHECK_THROWS_AS(integrate([](double x) { return std::exp(-x); }, bad, QuadConfig{}), Error);
}

TEST_CASE("oscillatory integrand") {
  QuadConfig cfg;
  cfg.oscillation_hint = 100.0 / (2 * pi);
  auto r = integrate([](double x) { return std::cos(100 * x); }, {0.0, 10.0}, cfg);
  CHECK(std::abs(r.value - std::sin(1000.0) / 100.0) < 1e-12);
  auto c = integrate_complex([](double x) { return std::polar(1.0, 50 * x); }, {0.0, 1.0}, cfg);
  cplx want = (std::polar(1.0, 50.0) - 1.0) / cplx(0, 50);
  CHECK(std::abs(c.value - want) < 1e-12);
}

TEST_CASE("max_panels") {
  QuadConfig cfg;
  cfg.max_panels = 16;
  cfg.rel_tol = 1e-15;
  cfg.abs_tol = 1e-300;
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, {1e-6, 1.0}, cfg), Error);
  cfg.max_panels = 4;
  cfg.oscillation_hint = 10;
  CHECK_THROWS_AS(integrate([](double x) { return x; }, {0.0, 1.0}, cfg), Error);
}

TEST_CASE("refinement stays within abs_err") {
  auto f = [](double x) { return std::sin(30 * x) * std::exp(-x) / (1 + x); };
  QuadConfig a;
  a.oscillation_hint = 30 / (2 * pi);
  a.rel_tol = 1e-9;
  auto r1 = integrate(f, {0.0, 20.0}, a);
  a.refine = 4.0;
  auto r4 = integrate(f, {0.0, 20.0}, a);
  CHECK(std::abs(r1.value - r4.value) <= r1.abs_err + r4.abs_err);
}

TEST_CASE("integrate_fixed") {
  double v = integrate_fixed<double>([](double x) { return x * x * x; }, 0.0, 2.0, 3);
  CHECK(v == doctest::Approx(4.0).epsilon(1e-14));
}
