#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rankinlab/specialfn.hpp"
#include "rankinlab/transforms.hpp"

using namespace rankinlab;

namespace {

double tilde_oracle(const SmoothWindow& w, int l) {
  return oracle::simpson([&](double y) { return oracle::bessel_j_int(l, y) * w(y) / y; }, w.A, w.B, 2000);
}

double check_oracle(const SmoothWindow& w, double t) {
  double s = oracle::simpson([&](double x) { return oracle::bessel_k_int(2 * t, x) * w(x) / x; }, w.A, w.B, 400);
  return 4.0 / pi * std::cosh(pi * t) * s;
}

}  // namespace

TEST_CASE("window shapes") {
  auto b = SmoothWindow::bump(1, 2, 1);
  CHECK(b(1.0) == 0.0);
  CHECK(b(2.0) == 0.0);
  CHECK(b(0.5) == 0.0);
  CHECK(b(1.5) > 0.0);
  auto p = SmoothWindow::bump(1, 2, 8);
  CHECK(p(1.5) == doctest::Approx(1.0));
  CHECK(smooth_step(-1) == 0.0);
  CHECK(smooth_step(2) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  auto g = SmoothWindow::gaussian(10, 1);
  CHECK(g(10) == doctest::Approx(1.0));
  CHECK(g.A == doctest::Approx(3.0));
  CHECK(g.B == doctest::Approx(17.0));
  auto s = b.scaled(10);
  CHECK(s(15) == doctest::Approx(b(1.5)));
}

TEST_CASE("window derivative scale") {
  // finite-difference j-th derivatives bounded by C (Z/width)^j with a modest fitted C
  for (double Z : {1.0, 4.0, 16.0}) {
    auto w = SmoothWindow::bump(1, 3, Z);
    double scale = std::max(Z, 1.0) / w.width();
    double h = w.width() * 1e-4, C = 0;
    for (int i = 1; i < 400; ++i) {
      double x = w.A + w.width() * i / 400.0;
      double d1 = (w(x + h) - w(x - h)) / (2 * h);
      double d2 = (w(x + h) - 2 * w(x) + w(x - h)) / (h * h);
      C = std::max({C, std::abs(d1) / scale, std::abs(d2) / (scale * scale)});
    }
    CHECK(C < 50);
  }
}

TEST_CASE("zero window gives zero") {
  auto z = SmoothWindow::zero(1, 2);
  CHECK(transform_tilde(z, 3).value == 0.0);
  CHECK(transform_hat(z, 1.0).value == 0.0);
  CHECK(transform_check(z, 1.0).value == 0.0);
  auto hz = SmoothWindow::zero(0.5, 2.5);
  CHECK(kernel_I(1, 1, 2, 3, hz, 12, 12).value == 0.0);
  CHECK(kernel_I0_I1(1, 1, 200, 3, hz, 1.0, 12, 0).value == 0.0);
  CHECK(kernel_I0_I1(1, 1, 200, 3, hz, 1.0, 12, 1).value == 0.0);
}

TEST_CASE("tilde against Bessel-integral oracle") {
  auto w = SmoothWindow::bump(1, 2, 1);
  for (int l : {1, 3, 6}) {
    auto r = transform_tilde(w, l);
    CHECK(std::abs(r.value - tilde_oracle(w, l)) < 1e-11);
  }
  CHECK(std::abs(transform_tilde(w, 3).value - 0.02039801695659351581569997) < 1e-13);
  auto wide = SmoothWindow::bump(20, 40, 2);
  CHECK(std::abs(transform_tilde(wide, 25).value - tilde_oracle(wide, 25)) < 1e-10);
}

TEST_CASE("hat against frozen mpmath values") {
  auto w = SmoothWindow::bump(1, 2, 1);
  auto a = transform_hat(w, 1.0);
  CHECK(std::abs(a.value - -0.2619391438613056605938653) < 1e-10);
  auto b = transform_hat(w, cplx(0.0, 0.3));
  CHECK(std::abs(b.value - 0.4582150674061577873628188) < 1e-10);
}

TEST_CASE("check against K-integral oracle") {
  auto w = SmoothWindow::bump(1, 2, 1);
  CHECK(std::abs(transform_check(w, 1.0).value - check_oracle(w, 1.0)) < 1e-11);
  CHECK(std::abs(transform_check(w, 1.0).value - 0.347022661460803016597737) < 1e-12);
  CHECK(std::abs(transform_check(w, 2.5).value - check_oracle(w, 2.5)) < 1e-10);
}

TEST_CASE("decay lemmas") {
  auto w = SmoothWindow::bump(100, 200, 1);
  CHECK(std::abs(transform_tilde(w, 2000).value) < 1e-8);
  double C = 0;
  for (int l = 1; l <= 200; l += 7) C = std::max(C, std::abs(transform_tilde(w, l).value) * 100 / (2 * std::log(100.0)));
  CHECK(C < 100);
  for (double t : {0.5, 1.0, 5.0})
    C = std::max(C, std::abs(transform_hat(w, t).value) * 100 / (2 * std::log(100.0)));
  CHECK(C < 100);
  auto one = SmoothWindow::bump(1, 2, 1);
  CHECK(std::abs(transform_hat(one, 150.0).value) < std::pow(1.0 / 150.0, 2));
  auto c50 = transform_check(SmoothWindow::bump(50, 100, 1), 1.0);
  auto c200 = transform_check(SmoothWindow::bump(200, 400, 1), 1.0);
  CHECK(std::abs(c200.value) < std::abs(c50.value));
}

TEST_CASE("tilde decay slope past 4X") {
  double X = 10;
  auto w = SmoothWindow::bump(X, 2 * X, 1);
  TransformConfig cfg;
  cfg.abs_tol = 1e-300;
  double l1 = 4 * X, l2 = 8 * X;
  double v1 = std::abs(transform_tilde(w, static_cast<int>(l1), cfg).value);
  double v2 = std::abs(transform_tilde(w, static_cast<int>(l2), cfg).value);
  double slope = (std::log(v2) - std::log(v1)) / (std::log(l2) - std::log(l1));
  CHECK(slope < -3);
}

TEST_CASE("refinement stability") {
  auto w = SmoothWindow::bump(50, 100, 2);
  TransformConfig c1, c4;
  c4.refine = 4.0;
  for (int l : {5, 60, 150}) {
    auto a = transform_tilde(w, l, c1), b = transform_tilde(w, l, c4);
    CHECK(std::abs(a.value - b.value) <= a.abs_err + b.abs_err);
  }
  for (double t : {0.5, 3.0}) {
    auto a = transform_hat(w, t, c1), b = transform_hat(w, t, c4);
    CHECK(std::abs(a.value - b.value) <= a.abs_err + b.abs_err);
    auto c = transform_check(w, t, c1), d = transform_check(w, t, c4);
    CHECK(std::abs(c.value - d.value) <= c.abs_err + d.abs_err);
  }
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  auto p = SmoothWindow::bump(1, 3, 1), q = SmoothWindow::gaussian(2, 0.2);
  for (int trial = 0; trial < 4; ++trial) {
    double a = u(rng), b = u(rng);
    auto m = SmoothWindow::combine(a, p, b, q);
    auto T = transform_tilde(m, 4), Tp = transform_tilde(p, 4), Tq = transform_tilde(q, 4);
    CHECK(std::abs(T.value - (a * Tp.value + b * Tq.value)) <= T.abs_err + Tp.abs_err + Tq.abs_err + 1e-15);
    auto H = transform_hat(m, 1.0), Hp = transform_hat(p, 1.0), Hq = transform_hat(q, 1.0);
    CHECK(std::abs(H.value - (a * Hp.value + b * Hq.value)) <= H.abs_err + Hp.abs_err + Hq.abs_err + 1e-15);
  }
}

TEST_CASE("kernel_I against oracle") {
  auto h = SmoothWindow::bump(0.5, 2.5, 1);
  double want = oracle::simpson(
      [&](double xi) {
        return h(xi) * oracle::bessel_j_int(11, 4 * pi * std::sqrt(2 * xi)) *
               oracle::bessel_j_int(11, 4 * pi * 1.2 * std::sqrt(3 * xi));
      },
      0.5, 2.5, 4000);
  auto r = kernel_I(1, 1.2, 2, 3, h, 12, 12);
  CHECK(std::abs(r.value - want) < 1e-12);
  CHECK(std::abs(r.value - -0.004941045066894022706102817) < 1e-13);
}

TEST_CASE("kernel_I gap decay") {
  auto h = SmoothWindow::bump(0.5, 2.5, 1);
  // a sqrt x = 30, b sqrt y = 30 - gap
  double prev3 = 1e300;
  for (double gap : {10.0, 15.0, 20.0}) {
    double by = 30 - gap;
    double v = std::abs(kernel_I(1, 1, 900, by * by, h, 12, 12).value);
    double c3 = v * std::pow(gap, 3) / std::pow(2.0, 3);
    CHECK(c3 < 1e3);
    CHECK(c3 < prev3 * 10);
    prev3 = c3;
  }
  double v = std::abs(kernel_I(1, 1, 400, 400, h, 12, 12).value);
  CHECK(v * 21 < 1e2);
}

TEST_CASE("I1 envelope") {
  auto h = SmoothWindow::bump(0.5, 2.5, 1);
  auto r = kernel_I0_I1(1, 1, 225, 4, h, 1.0, 12, 1);
  CHECK(std::abs(r.value) <= std::exp(-2 * pi * 15) * 1e3);
  CHECK_THROWS_AS(kernel_I0_I1(1, 1, 4, 4, h, 1.0, 12, 0), Error);
}
