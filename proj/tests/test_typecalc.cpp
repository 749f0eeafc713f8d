#include <doctest.h>

#include <cmath>

#include "rankinlab/transforms.hpp"
#include "rankinlab/typecalc.hpp"

using namespace rankinlab;

namespace {

bool same_type(const FuncType& a, const FuncType& b) { return same(a, b); }

}  // namespace

TEST_CASE("expression algebra") {
  auto x = var("x"), y = var("y");
  CHECK(same(x + y, y + x));
  CHECK(same(x * y, y * x));
  CHECK(same(x * cst(1.0), x));
  CHECK(same(x + cst(0.0), x));
  CHECK(is_zero(x * cst(0.0)));
  CHECK(is_zero(x - x));
  CHECK(same(abs_(x), x));  // variables are positive
  CHECK(same(sqrt_(x) * sqrt_(x), x));
  CHECK(same(x / x, cst(1.0)));
  CHECK(eval(pow_(x, 3) + min_(x, y), {{"x", 2.0}, {"y", 1.0}}) == doctest::Approx(9.0));
  CHECK(same(subst(x * y, {{"x", cst(2.0) * y}}), cst(2.0) * y * y));
  CHECK_FALSE(to_string(x + y).empty());
}

TEST_CASE("derivative rule") {
  auto x = var("x"), y = var("y");
  auto t = make_type({"x"}, cst(1.0), {abs_(x)});
  auto d = type_derivative(t, 0);
  CHECK(same(d.Z, abs_(x) / x));
  CHECK(same(d.F[0], t.F[0]));
  auto t2 = make_type({"x", "y"}, cst(1.0), {abs_(x), cst(0.0)});
  CHECK(is_zero(type_derivative(t2, 1).Z));
  auto dd = type_derivative(type_derivative(t, 0), 0);
  CHECK(same(dd.Z, (abs_(x) / x) * (abs_(x) / x)));
  auto g = make_type({"x", "y"}, var("Z"), {x + y, sqrt_(y)});
  CHECK(same_type(type_derivative(type_derivative(g, 0), 1), type_derivative(type_derivative(g, 1), 0)));
  CHECK_THROWS_AS(type_derivative(t, 3), Error);
}

TEST_CASE("product rule") {
  auto x = var("x");
  auto ex = make_type({"x"}, cst(1.0), {abs_(x)});
  auto win = make_type({"x"}, cst(1.0), {var("Z_h")});
  auto one = make_type({"x"}, cst(1.0), {cst(0.0)});
  CHECK(same_type(type_product(ex, one), ex));
  auto p = type_product(ex, win);
  CHECK(same(p.Z, cst(1.0)));
  CHECK(same(p.F[0], abs_(x) + var("Z_h")));
  CHECK(same_type(type_product(ex, win), type_product(win, ex)));
  auto third = make_type({"x"}, var("A"), {sqrt_(x)});
  CHECK(same_type(type_product(type_product(ex, win), third), type_product(ex, type_product(win, third))));
  auto two = make_type({"x", "y"}, cst(1.0), {x, var("y")});
  CHECK_THROWS_AS(type_product(ex, two), Error);
  try {
    type_product(ex, two);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ArityMismatch);
  }
}

TEST_CASE("composition rule") {
  auto x = var("x"), y = var("y"), h = var("h"), d = var("delta");
  // identity inner map: F_1(x) + 1
  auto outer = make_type({"u"}, cst(1.0), {var("u") * var("u")});
  auto id = InnerMap{make_type({"x"}, x, {cst(1.0)}), x};
  auto c = type_compose(outer, {id});
  CHECK(same(c.Z, cst(1.0)));
  CHECK(same(c.F[0], x * x + cst(1.0)));
  // affine inner map G = 2x
  auto lin = make_type({"u"}, cst(1.0), {var("u")});
  auto twice = InnerMap{make_type({"x"}, cst(2.0) * x, {cst(1.0)}), cst(2.0) * x};
  CHECK(same(type_compose(lin, {twice}).F[0], cst(2.0) * x + cst(1.0)));
  // w_delta(u1 - u2 - u3) with u = (l1 x, l2 y, h c0)
  auto w = make_type({"u1", "u2", "u3"}, cst(1.0), {d * var("u1"), d * var("u2"), d * var("u3")});
  auto l1x = var("l1") * x, l2y = var("l2") * y, hc = h * var("c0");
  std::vector<InnerMap> G = {
      {make_type({"x", "y", "h"}, l1x, {cst(1.0), cst(0.0), cst(0.0)}), l1x},
      {make_type({"x", "y", "h"}, l2y, {cst(0.0), cst(1.0), cst(0.0)}), l2y},
      {make_type({"x", "y", "h"}, hc, {cst(0.0), cst(0.0), cst(1.0)}), hc},
  };
  auto wc = type_compose(w, G);
  CHECK(same(wc.Z, cst(1.0)));
  CHECK(same(wc.F[0], d * l1x + cst(1.0)));
  CHECK(same(wc.F[1], d * l2y + cst(1.0)));
  CHECK(same(wc.F[2], d * hc + cst(1.0)));
  CHECK_THROWS_AS(type_compose(w, {G[0], G[1]}), Error);
  auto zero = InnerMap{make_type({"x"}, cst(1.0), {cst(1.0)}), cst(0.0)};
  try {
    type_compose(lin, {zero});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VanishingInner);
  }
}

TEST_CASE("multi-indices") {
  auto I = multi_indices_upto(2, 3);
  CHECK(I.size() == 10);
  CHECK(multi_indices_upto(3, 2).size() == 10);
}

TEST_CASE("numeric verification of fixtures") {
  for (const auto& fx : all_fixtures()) {
    auto rep = verify_type(fx.tf, fx.indices, 12, 1);
    CAPTURE(fx.name);
    CAPTURE(rep.C);
    CHECK(rep.pass == fx.expect_pass);
    if (fx.name == "exponential") CHECK(rep.C <= std::pow(2 * pi, 3) * (1 + 1e-6));
    if (fx.name == "wrong") CHECK(rep.C > 1e6);
    if (fx.expect_pass) CHECK(rep.C_rescaled <= 4 * std::max(rep.C, 1.0));
  }
}

TEST_CASE("bounded bump") {
  auto g = SmoothWindow::gaussian(7.0, 0.95);
  TypedFunction tf;
  tf.f = [g](const std::vector<double>& p) { return cplx(g(p[0])); };
  tf.claimed = make_type({"x"}, cst(1.0), {cst(1.0)});
  tf.box = {{1.0, 13.0}};
  auto rep = verify_type(tf, multi_indices_upto(1, 3), 16, 3);
  CAPTURE(rep.C);
  CHECK(rep.pass);
}
