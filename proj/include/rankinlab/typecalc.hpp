#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rankinlab/common.hpp"

namespace rankinlab {

// Canonical symbolic expressions. Every variable is assumed positive, which is
// how the type calculus uses them (coordinates, scales, parameters).
struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Op { constant, var, abs, add, mul, pow, min } op;
  double c = 0.0;        // constant value, or coefficient-free exponent for pow
  std::string name;      // var
  std::vector<Expr> args;
  std::string key;       // canonical printed form; equal keys mean equal expressions
};

Expr cst(double c);
Expr var(const std::string& name);
Expr abs_(const Expr& e);
Expr pow_(const Expr& e, double p);
Expr sqrt_(const Expr& e);
Expr min_(const Expr& a, const Expr& b);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

bool same(const Expr& a, const Expr& b);
bool is_zero(const Expr& e);
std::string to_string(const Expr& e);
Expr subst(const Expr& e, const std::map<std::string, Expr>& s);
double eval(const Expr& e, const std::map<std::string, double>& env);

// (Z : F_1, ..., F_n) over the named variables
struct FuncType {
  std::vector<std::string> vars;
  Expr Z;
  std::vector<Expr> F;

  std::size_t arity() const { return vars.size(); }
  std::string str() const;
};

FuncType make_type(std::vector<std::string> vars, Expr Z, std::vector<Expr> F);
bool same(const FuncType& a, const FuncType& b);

FuncType type_derivative(const FuncType& t, std::size_t k);
FuncType type_product(const FuncType& a, const FuncType& b);

struct InnerMap {
  FuncType type;  // type of G_k in the new variables
  Expr value;     // G_k itself
};
FuncType type_compose(const FuncType& outer, const std::vector<InnerMap>& inners);

// --- numeric verification

struct TypedFunction {
  std::function<cplx(const std::vector<double>&)> f;
  FuncType claimed;
  std::vector<std::pair<double, double>> box;  // per variable, positive
  std::map<std::string, double> params;        // values of non-coordinate symbols
};

struct TypeSample {
  std::vector<double> point;
  std::vector<int> index;
  double measured = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct TypeReport {
  double C = 0.0;           // max ratio on the box
  double C_rescaled = 0.0;  // max ratio on the dyadically rescaled box
  bool pass = false;
  std::vector<TypeSample> samples;  // worst sample per (point, index) on the base box
};

// all multi-indices with |I| <= order
std::vector<std::vector<int>> multi_indices_upto(std::size_t n, int order);

TypeReport verify_type(const TypedFunction& tf, const std::vector<std::vector<int>>& indices, int samples,
                       std::uint64_t seed = 1, double C_max = 1e3);

// --- fixtures

struct TypeFixture {
  std::string name;
  TypedFunction tf;
  std::vector<std::vector<int>> indices;
  bool expect_pass = true;
};

TypeFixture fixture_exponential();    // e(x) with (1 : |x|, 0)
TypeFixture fixture_product();        // e(x) h(x/X) with (1 : |x| + Z_h)
TypeFixture fixture_composed();       // w_delta(l1 x - l2 y - h c0) with (1 : delta l1 x, delta l2 y, delta h c0)
TypeFixture fixture_wrong();          // e(x) with (1 : 1)
TypeFixture fixture_kernel_I();       // the I kernel at L = 1, X = 16, D = 8
std::vector<TypeFixture> all_fixtures();

}  // namespace rankinlab
