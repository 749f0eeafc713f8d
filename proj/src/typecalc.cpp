#include "rankinlab/typecalc.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <random>

#include "rankinlab/parallel.hpp"
#include "rankinlab/quad.hpp"
#include "rankinlab/specialfn.hpp"
#include "rankinlab/traceverify.hpp"
#include "rankinlab/transforms.hpp"

namespace rankinlab {

// --- canonical construction

namespace {

using Op = ExprNode::Op;

std::string num_key(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", c);
  return buf;
}

Expr node(Op op, std::vector<Expr> args, double c = 0.0, std::string name = {}) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->c = c;
  n->name = std::move(name);
  n->args = std::move(args);
  switch (op) {
    case Op::constant: n->key = num_key(c); break;
    case Op::var: n->key = n->name; break;
    case Op::abs: n->key = "|" + n->args[0]->key + "|"; break;
    case Op::pow: n->key = "(" + n->args[0]->key + ")^" + num_key(c); break;
    case Op::min: n->key = "min(" + n->args[0]->key + ", " + n->args[1]->key + ")"; break;
    case Op::add:
    case Op::mul: {
      std::string sep = op == Op::add ? " + " : "*";
      std::string k = op == Op::add ? "(" : "";
      for (std::size_t i = 0; i < n->args.size(); ++i) k += (i ? sep : "") + n->args[i]->key;
      n->key = k + (op == Op::add ? ")" : "");
      break;
    }
  }
  return n;
}

bool by_key(const Expr& a, const Expr& b) {
  bool ca = a->op == Op::constant, cb = b->op == Op::constant;
  if (ca != cb) return ca;
  return a->key < b->key;
}

bool nonneg(const Expr& e) {
  switch (e->op) {
    case Op::constant: return e->c >= 0;
    case Op::var:
    case Op::abs: return true;
    case Op::pow: return nonneg(e->args[0]) || std::fmod(e->c, 2.0) == 0.0;
    case Op::add:
    case Op::mul:
    case Op::min: return std::all_of(e->args.begin(), e->args.end(), nonneg);
  }
  return false;
}

Expr make_mul(std::vector<Expr> fs);
Expr make_add(std::vector<Expr> in);

Expr make_pow(const Expr& e, double p) {
  if (p == 0.0) return cst(1.0);
  if (p == 1.0) return e;
  if (e->op == Op::constant) return cst(std::pow(e->c, p));
  if (e->op == Op::pow) return make_pow(e->args[0], e->c * p);
  if (e->op == Op::mul) {
    std::vector<Expr> fs;
    for (const auto& f : e->args) fs.push_back(make_pow(f, p));
    return make_mul(std::move(fs));
  }
  return node(Op::pow, {e}, p);
}

Expr make_mul(std::vector<Expr> in) {
  double coef = 1.0;
  std::vector<std::pair<Expr, double>> bases;
  std::vector<Expr> stack(in.rbegin(), in.rend());
  while (!stack.empty()) {
    Expr f = stack.back();
    stack.pop_back();
    if (f->op == Op::mul) {
      for (auto it = f->args.rbegin(); it != f->args.rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (f->op == Op::constant) {
      coef *= f->c;
      continue;
    }
    Expr base = f->op == Op::pow ? f->args[0] : f;
    double ex = f->op == Op::pow ? f->c : 1.0;
    auto it = std::find_if(bases.begin(), bases.end(), [&](const auto& b) { return b.first->key == base->key; });
    if (it == bases.end())
      bases.emplace_back(base, ex);
    else
      it->second += ex;
  }
  if (coef == 0.0) return cst(0.0);
  // expand over the first plain sum so that sums of monomials stay canonical
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].first->op != Op::add || bases[i].second != 1.0) continue;
    std::vector<Expr> others{cst(coef)};
    for (std::size_t j = 0; j < bases.size(); ++j)
      if (j != i) others.push_back(make_pow(bases[j].first, bases[j].second));
    std::vector<Expr> terms;
    for (const auto& t : bases[i].first->args) {
      auto fs = others;
      fs.push_back(t);
      terms.push_back(make_mul(std::move(fs)));
    }
    return make_add(std::move(terms));
  }
  std::vector<Expr> out;
  for (const auto& [b, ex] : bases) {
    if (std::abs(ex) < 1e-14) continue;
    out.push_back(ex == 1.0 ? b : node(Op::pow, {b}, ex));
  }
  std::sort(out.begin(), out.end(), by_key);
  if (out.empty()) return cst(coef);
  if (coef != 1.0) out.insert(out.begin(), cst(coef));
  if (out.size() == 1) return out[0];
  return node(Op::mul, std::move(out));
}

// coefficient and remaining monomial of a term
std::pair<double, Expr> split_coef(const Expr& t) {
  if (t->op == Op::mul && t->args[0]->op == Op::constant) {
    std::vector<Expr> rest(t->args.begin() + 1, t->args.end());
    return {t->args[0]->c, rest.size() == 1 ? rest[0] : node(Op::mul, std::move(rest))};
  }
  return {1.0, t};
}

Expr make_add(std::vector<Expr> in) {
  double constant = 0.0;
  std::vector<std::pair<Expr, double>> terms;
  std::vector<Expr> stack(in.rbegin(), in.rend());
  while (!stack.empty()) {
    Expr t = stack.back();
    stack.pop_back();
    if (t->op == Op::add) {
      for (auto it = t->args.rbegin(); it != t->args.rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (t->op == Op::constant) {
      constant += t->c;
      continue;
    }
    auto [c, rest] = split_coef(t);
    auto it = std::find_if(terms.begin(), terms.end(), [&](const auto& x) { return x.first->key == rest->key; });
    if (it == terms.end())
      terms.emplace_back(rest, c);
    else
      it->second += c;
  }
  std::vector<Expr> out;
  for (const auto& [rest, c] : terms) {
    if (c == 0.0) continue;
    out.push_back(c == 1.0 ? rest : make_mul({cst(c), rest}));
  }
  if (constant != 0.0) out.push_back(cst(constant));
  std::sort(out.begin(), out.end(), by_key);
  if (out.empty()) return cst(0.0);
  if (out.size() == 1) return out[0];
  return node(Op::add, std::move(out));
}

}  // namespace

Expr cst(double c) { return node(Op::constant, {}, c); }
Expr var(const std::string& name) { return node(Op::var, {}, 0.0, name); }

Expr abs_(const Expr& e) {
  if (e->op == Op::constant) return cst(std::abs(e->c));
  if (nonneg(e)) return e;
  if (e->op == Op::mul) {
    std::vector<Expr> fs;
    for (const auto& f : e->args) fs.push_back(abs_(f));
    return make_mul(std::move(fs));
  }
  if (e->op == Op::pow) return make_pow(abs_(e->args[0]), e->c);
  return node(Op::abs, {e});
}

Expr pow_(const Expr& e, double p) { return make_pow(e, p); }
Expr sqrt_(const Expr& e) { return make_pow(e, 0.5); }

Expr min_(const Expr& a, const Expr& b) {
  if (a->op == Op::constant && b->op == Op::constant) return cst(std::min(a->c, b->c));
  if (a->key == b->key) return a;
  return by_key(a, b) ? node(Op::min, {a, b}) : node(Op::min, {b, a});
}

Expr operator+(const Expr& a, const Expr& b) { return make_add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return make_add({a, make_mul({cst(-1.0), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return make_mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b->op == Op::constant && b->c == 0.0) throw Error(ErrorKind::InvalidArgument, "division by zero");
  return make_mul({a, make_pow(b, -1.0)});
}

bool same(const Expr& a, const Expr& b) { return a->key == b->key; }
bool is_zero(const Expr& e) { return e->op == Op::constant && e->c == 0.0; }
std::string to_string(const Expr& e) { return e->key; }

Expr subst(const Expr& e, const std::map<std::string, Expr>& s) {
  switch (e->op) {
    case Op::constant: return e;
    case Op::var: {
      auto it = s.find(e->name);
      return it == s.end() ? e : it->second;
    }
    case Op::abs: return abs_(subst(e->args[0], s));
    case Op::pow: return make_pow(subst(e->args[0], s), e->c);
    case Op::min: return min_(subst(e->args[0], s), subst(e->args[1], s));
    case Op::add:
    case Op::mul: {
      std::vector<Expr> xs;
      for (const auto& a : e->args) xs.push_back(subst(a, s));
      return e->op == Op::add ? make_add(std::move(xs)) : make_mul(std::move(xs));
    }
  }
  return e;
}

double eval(const Expr& e, const std::map<std::string, double>& env) {
  switch (e->op) {
    case Op::constant: return e->c;
    case Op::var: {
      auto it = env.find(e->name);
      if (it == env.end()) throw Error(ErrorKind::InvalidArgument, "unbound symbol " + e->name);
      return it->second;
    }
    case Op::abs: return std::abs(eval(e->args[0], env));
    case Op::pow: return std::pow(eval(e->args[0], env), e->c);
    case Op::min: return std::min(eval(e->args[0], env), eval(e->args[1], env));
    case Op::add: {
      double s = 0.0;
      for (const auto& a : e->args) s += eval(a, env);
      return s;
    }
    case Op::mul: {
      double s = 1.0;
      for (const auto& a : e->args) s *= eval(a, env);
      return s;
    }
  }
  return 0.0;
}

// --- types

std::string FuncType::str() const {
  std::string s = "(" + Z->key + " :";
  for (std::size_t i = 0; i < F.size(); ++i) s += (i ? ", " : " ") + F[i]->key;
  return s + ")";
}

FuncType make_type(std::vector<std::string> vars, Expr Z, std::vector<Expr> F) {
  if (vars.empty()) throw Error(ErrorKind::InvalidArgument, "a type needs at least one variable");
  if (F.size() != vars.size()) throw Error(ErrorKind::ArityMismatch, "one F per variable");
  return {std::move(vars), std::move(Z), std::move(F)};
}

bool same(const FuncType& a, const FuncType& b) {
  if (a.vars != b.vars || !same(a.Z, b.Z)) return false;
  for (std::size_t i = 0; i < a.F.size(); ++i)
    if (!same(a.F[i], b.F[i])) return false;
  return true;
}

FuncType type_derivative(const FuncType& t, std::size_t k) {
  if (k >= t.arity()) throw Error(ErrorKind::InvalidArgument, "variable index out of range");
  FuncType r = t;
  r.Z = t.Z * t.F[k] / var(t.vars[k]);
  return r;
}

FuncType type_product(const FuncType& a, const FuncType& b) {
  if (a.arity() != b.arity()) throw Error(ErrorKind::ArityMismatch, "product of types with different arity");
  if (a.vars != b.vars) throw Error(ErrorKind::ArityMismatch, "product of types over different variables");
  FuncType r = a;
  r.Z = a.Z * b.Z;
  for (std::size_t j = 0; j < a.arity(); ++j) r.F[j] = a.F[j] + b.F[j];
  return r;
}

FuncType type_compose(const FuncType& outer, const std::vector<InnerMap>& inners) {
  if (inners.size() != outer.arity()) throw Error(ErrorKind::ArityMismatch, "one inner map per outer variable");
  const auto& nv = inners.at(0).type.vars;
  for (const auto& g : inners) {
    if (g.type.vars != nv) throw Error(ErrorKind::ArityMismatch, "inner maps over different variables");
    if (is_zero(g.value)) throw Error(ErrorKind::VanishingInner, "inner map is identically zero");
  }
  std::map<std::string, Expr> at_G;
  for (std::size_t k = 0; k < inners.size(); ++k) at_G[outer.vars[k]] = inners[k].value;
  FuncType r;
  r.vars = nv;
  r.Z = subst(outer.Z, at_G);
  for (std::size_t j = 0; j < nv.size(); ++j) {
    Expr s = cst(0.0);
    for (std::size_t k = 0; k < inners.size(); ++k) {
      const auto& g = inners[k];
      if (is_zero(g.type.F[j])) continue;
      s = s + (subst(outer.F[k], at_G) * g.type.Z + g.value) * g.type.F[j] / g.value;
    }
    r.F.push_back(s);
  }
  return r;
}

// --- finite differences

std::vector<std::vector<int>> multi_indices_upto(std::size_t n, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(0, order);
  return out;
}

namespace {

struct FDValue {
  cplx value;
  double round_err;
};

// central difference of multi-order I with per-variable steps h
FDValue central(const TypedFunction& tf, const std::vector<double>& x, const std::vector<int>& I,
                const std::vector<double>& h) {
  std::size_t n = x.size();
  std::vector<int> m(n, 0);
  cplx sum = 0.0;
  double fmax = 0.0, c2 = 0.0;
  std::vector<double> p(n);
  while (true) {
    double c = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      c *= ((m[j] % 2) ? -1.0 : 1.0) * std::tgamma(I[j] + 1.0) / (std::tgamma(m[j] + 1.0) * std::tgamma(I[j] - m[j] + 1.0));
      p[j] = x[j] + (I[j] / 2.0 - m[j]) * h[j];
    }
    cplx fv = tf.f(p);
    fmax = std::max(fmax, std::abs(fv));
    c2 += c * c;
    sum += c * fv;
    std::size_t j = 0;
    while (j < n && ++m[j] > I[j]) m[j++] = 0;
    if (j == n) break;
  }
  double scale = 1.0;
  for (std::size_t j = 0; j < n; ++j) scale /= std::pow(h[j], I[j]);
  // independent rounding in each evaluation
  return {sum * scale, 2.0 * DBL_EPSILON * fmax * std::sqrt(c2) * scale};
}

struct Measured {
  double value;  // |x^I d^I f|
  double round_err;
};

// Romberg-extrapolated central differences; a level is scored by the larger of
// its two neighbouring changes, and the best relative score is the error estimate
Measured measure(const TypedFunction& tf, const std::vector<double>& x0, const std::vector<int>& I,
                 const std::vector<double>& scale) {
  std::size_t n = x0.size();
  int order = 0;
  for (int i : I) order += i;
  // snap to a 20-bit grid of quantum q; steps are (m q) 2^-k with m < 2^20, so
  // every stencil point x + j h/2 is exact
  std::vector<double> x(n), q(n), h0(n);
  for (std::size_t j = 0; j < n; ++j) {
    q[j] = std::ldexp(1.0, std::ilogb(x0[j]) - 20);
    x[j] = std::round(x0[j] / q[j]) * q[j];
    // non-dyadic start, off the exact periods of e(x)
    h0[j] = std::max(1.0, std::round(0.7313 * scale[j] / q[j])) * q[j];
  }
  double xI = 1.0;
  for (std::size_t j = 0; j < n; ++j) xI *= std::pow(x[j], I[j]);
  if (order == 0) {
    double v = std::abs(tf.f(x));
    return {v, DBL_EPSILON * v};
  }
  std::vector<double> h(n);
  auto at = [&](int k) {
    for (std::size_t j = 0; j < n; ++j) h[j] = std::ldexp(h0[j], -k);
    return central(tf, x, I, h);
  };
  // Romberg table on the even-power error expansion of central differences
  constexpr int depth = 3;
  std::vector<cplx> row_prev, row;
  FDValue first = at(0);
  row_prev = {first.value};
  cplx prev_rich = 0.0, best = 0.0;
  double prev_diff = INFINITY, prev_re = 0.0, best_score = INFINITY, best_rel = INFINITY, best_re = 0.0;
  int best_k = 0;
  for (int k = 1; k <= 40; ++k) {
    FDValue cur = at(k);
    int cols = std::min(k, depth);
    row.assign(cols + 1, 0.0);
    row[0] = cur.value;
    double amp = 1.0;
    for (int j = 1; j <= cols; ++j) {
      double p4 = std::pow(4.0, j);
      row[j] = (p4 * row[j - 1] - row_prev[j - 1]) / (p4 - 1.0);
      amp *= (p4 + 1.0) / (p4 - 1.0);
    }
    cplx rich = row[cols];
    double re = cur.round_err * amp;
    if (k >= 2) {
      double diff = std::abs(rich - prev_rich);
      double score = std::max(diff, prev_diff);
      double rel = (score + prev_re) / std::max(std::abs(prev_rich), DBL_MIN);
      if (k >= 3 && rel < best_rel) {
        best_rel = rel;
        best_score = score;
        best = prev_rich;
        best_re = prev_re;
        best_k = k;
      }
      if (best_rel <= 1e-10 || (best_rel <= 1e-6 && k >= best_k + 3 && diff > 100.0 * best_score)) break;
      prev_diff = diff;
    }
    prev_rich = rich;
    prev_re = re;
    row_prev = row;
  }
  double v = std::abs(best) * xI;
  double err = (best_score + best_re) * xI;
  return {v, err};
}

TypeReport run_box(const TypedFunction& tf, const std::vector<std::vector<int>>& indices, int samples,
                   std::uint64_t seed, bool keep) {
  std::size_t n = tf.claimed.arity();
  if (tf.box.size() != n) throw Error(ErrorKind::ArityMismatch, "box dimension does not match the type");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(samples), std::vector<double>(n));
  for (auto& p : pts)
    for (std::size_t j = 0; j < n; ++j) {
      auto [lo, hi] = tf.box[j];
      if (!(lo > 0 && hi >= lo)) throw Error(ErrorKind::InvalidArgument, "box must be positive");
      std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
      p[j] = std::exp(u(rng));
    }
  std::vector<std::vector<TypeSample>> per(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const auto& x = pts[i];
    auto env = tf.params;
    for (std::size_t j = 0; j < n; ++j) env[tf.claimed.vars[j]] = x[j];
    double Z = eval(tf.claimed.Z, env);
    std::vector<double> F(n), scale(n);
    for (std::size_t j = 0; j < n; ++j) {
      F[j] = eval(tf.claimed.F[j], env);
      // largest step: half the variation length x/F the claim allows, at most x/2
      scale[j] = std::min(0.5 * x[j], 0.5 * x[j] / std::max(F[j], 1e-300));
    }
    for (const auto& I : indices) {
      if (I.size() != n) throw Error(ErrorKind::ArityMismatch, "multi-index arity");
      int order = 0;
      for (int k : I) order += k;
      if (order > 3) throw Error(ErrorKind::InvalidArgument, "multi-index order must be <= 3");
      auto m = measure(tf, x, I, scale);
      double bound = Z;
      for (std::size_t j = 0; j < n; ++j) bound *= std::pow(F[j], I[j]);
      if (bound > 0 && m.round_err > 1e-6 * std::max(m.value, bound))
        throw Error(ErrorKind::NumericallyUnstable,
                    "finite differences lose more than 6 digits at order " + std::to_string(order) + " (value " +
                        num_key(m.value) + ", error " + num_key(m.round_err) + ", bound " + num_key(bound) + ")");
      TypeSample s{x, I, m.value, bound, 0.0};
      if (bound > 0)
        s.ratio = m.value / bound;
      else
        s.ratio = m.value <= 10.0 * m.round_err + 1e-300 ? 0.0 : INFINITY;
      per[i].push_back(s);
    }
  });
  TypeReport r;
  for (auto& v : per)
    for (auto& s : v) {
      r.C = std::max(r.C, s.ratio);
      if (keep) r.samples.push_back(std::move(s));
    }
  return r;
}

}  // namespace

TypeReport verify_type(const TypedFunction& tf, const std::vector<std::vector<int>>& indices, int samples,
                       std::uint64_t seed, double C_max) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  auto base = run_box(tf, indices, samples, seed, true);
  TypedFunction big = tf;
  for (auto& [lo, hi] : big.box) {
    lo *= 2.0;
    hi *= 2.0;
  }
  auto scaled = run_box(big, indices, samples, seed + 1, false);
  base.C_rescaled = scaled.C;
  base.pass = std::isfinite(base.C) && base.C <= C_max && std::isfinite(scaled.C) &&
              scaled.C <= 4.0 * std::max(base.C, 1.0);
  return base;
}

// --- fixtures

namespace {

// exact reduction mod 1 keeps the phase accurate for large x
cplx e_cplx(double x) { return std::polar(1.0, 2.0 * pi * (x - std::floor(x))); }

}  // namespace

TypeFixture fixture_exponential() {
  TypeFixture fx;
  fx.name = "exponential";
  fx.tf.f = [](const std::vector<double>& p) { return e_cplx(p[0]); };
  fx.tf.claimed = make_type({"x", "y"}, cst(1.0), {abs_(var("x")), cst(0.0)});
  fx.tf.box = {{1.0, 1e3}, {1.0, 10.0}};
  fx.indices = multi_indices_upto(2, 3);
  return fx;
}

TypeFixture fixture_product() {
  TypeFixture fx;
  fx.name = "product";
  const double X = 100.0;
  auto h = SmoothWindow::bump(1.0, 2.0, 1.0);
  fx.tf.f = [h, X](const std::vector<double>& p) { return e_cplx(p[0]) * h(p[0] / X); };
  FuncType ex = make_type({"x"}, cst(1.0), {abs_(var("x"))});
  FuncType win = make_type({"x"}, cst(1.0), {var("Z_h")});
  fx.tf.claimed = type_product(ex, win);
  fx.tf.params = {{"Z_h", 1.0}};
  fx.tf.box = {{100.0, 200.0}};
  fx.indices = multi_indices_upto(1, 3);
  return fx;
}

TypeFixture fixture_composed() {
  TypeFixture fx;
  fx.name = "composed";
  const double delta = 0.01, l1 = 2.0, l2 = 3.0, c0 = 1.5;
  fx.tf.f = [=](const std::vector<double>& p) { return cplx(w_delta(l1 * p[0] - l2 * p[1] - p[2] * c0, delta)); };
  auto d = var("delta");
  fx.tf.claimed = make_type({"x", "y", "h"}, cst(1.0),
                            {d * var("l1") * var("x"), d * var("l2") * var("y"), d * var("h") * var("c0")});
  fx.tf.params = {{"delta", delta}, {"l1", l1}, {"l2", l2}, {"c0", c0}};
  fx.tf.box = {{10.0, 1000.0}, {10.0, 1000.0}, {1.0, 100.0}};
  fx.indices = multi_indices_upto(3, 3);
  return fx;
}

TypeFixture fixture_wrong() {
  TypeFixture fx = fixture_exponential();
  fx.name = "wrong";
  fx.tf.claimed = make_type({"x"}, cst(1.0), {cst(1.0)});
  fx.tf.box = {{1.0, 1e3}};
  fx.indices = multi_indices_upto(1, 3);
  fx.expect_pass = false;
  return fx;
}

TypeFixture fixture_kernel_I() {
  TypeFixture fx;
  fx.name = "kernel_I";
  const double L = 1.0, X = 16.0, D = 8.0;
  const int k = 12, kappa = 12;
  auto h = SmoothWindow::bump(0.5, 2.5, 1.0);
  auto h0 = SmoothWindow::bump(0.5, 2.5, 1.0);
  auto ok = BesselOrder::integer(k - 1), oc = BesselOrder::integer(kappa - 1);
  // 2 sqrt(Xx/Ld^2) h0(d/D) h(y/X) int h(u)/(2 sqrt u) 2pi J_{k-1}(4pi sqrt(Xxu/Ld^2)) J_{kappa-1}(4pi sqrt(Xyu/d^2)) du
  fx.tf.f = [=](const std::vector<double>& p) {
    double x = p[0], y = p[1], d = p[2];
    double w = h0(d / D) * h(y / X);
    if (w == 0.0) return cplx(0.0);
    double a = X * x / (L * d * d), b = X * y / (d * d);
    auto g = [&](double u) {
      return h(u) / (2.0 * std::sqrt(u)) * 2.0 * pi * bessel_j(ok, 4.0 * pi * std::sqrt(a * u)).value *
             bessel_j(oc, 4.0 * pi * std::sqrt(b * u)).value;
    };
    // fixed nodes keep the quadrature a smooth function of (x, y, d)
    double I = integrate_fixed<double>(g, h.A, h.B, 96);
    return cplx(2.0 * std::sqrt(a) * w * I);
  };
  auto x = var("x"), y = var("y"), Xs = var("X"), Ls = var("L"), Ds = var("D"), Zh = var("Z_h");
  auto sx = sqrt_(x * Xs / (Ls * Ds * Ds));
  fx.tf.claimed = make_type({"x", "y", "d"}, min_(cst(1.0), sx),
                            {sx + cst(1.0), sqrt_(y * Xs / (Ds * Ds)) + cst(1.0) + Zh, cst(1.0) + Zh});
  fx.tf.params = {{"X", X}, {"L", L}, {"D", D}, {"Z_h", 1.0}};
  fx.tf.box = {{2.0, 64.0}, {8.0, 40.0}, {4.0, 20.0}};
  fx.indices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  return fx;
}

std::vector<TypeFixture> all_fixtures() {
  return {fixture_exponential(), fixture_product(), fixture_composed(), fixture_wrong(), fixture_kernel_I()};
}

}  // namespace rankinlab
