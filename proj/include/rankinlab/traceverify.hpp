#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "rankinlab/common.hpp"
#include "rankinlab/forms.hpp"
#include "rankinlab/transforms.hpp"

namespace rankinlab {

using Rational = boost::multiprecision::cpp_rational;

// --- Petersson

EvalResult petersson_geometric_R(std::int64_t m, std::int64_t n, int k, std::int64_t M, std::int64_t c_max,
                                 double tail_tol = 1e-8);

struct Rank1Report {
  double max_factor_defect = 0.0;  // |R(m,n)R(1,1) - R(m,1)R(1,n)|
  double max_lambda_defect = 0.0;  // |R(m,n)/R(1,1) - lambda(m)lambda(n)|
  std::int64_t worst_m = 1, worst_n = 1;
  double max_abs_err = 0.0;
  double R11 = 0.0;
  // R(m,n) for 1 <= m,n <= grid, row-major
  std::vector<double> R;
};

Rank1Report petersson_rank1_check(const CuspForm& f, int grid, std::int64_t c_max);

// --- Voronoi

CEvalResult voronoi_lhs(const CuspForm& f, std::int64_t a, std::int64_t q, const SmoothWindow& h);
// n_max <= 0 picks the dual length adaptively (bounded by the coefficient table)
CEvalResult voronoi_rhs(const CuspForm& f, std::int64_t a, std::int64_t q, const SmoothWindow& h,
                        std::int64_t n_max = 0, double tol = 1e-9);

// --- Jutila circle method

struct StepFunction {
  std::vector<Rational> breakpoints;  // strictly increasing
  std::vector<Rational> values;       // values[i] on (breakpoints[i], breakpoints[i+1]); zero outside
  Rational delta;
  std::int64_t Lambda = 0;
  std::int64_t raw_endpoints = 0;  // 2 Lambda before merging coincident endpoints

  Rational integral() const;
  double operator()(double x) const;
};

StepFunction jutila_build(const std::vector<std::int64_t>& Q_set, const Rational& delta);
// int_R |1_[0,1] - I|^2, exact
Rational jutila_l2_error(const StepFunction& I);
double jutila_bound(double Q, const StepFunction& I);
// q in (Q, 2Q]
std::vector<std::int64_t> jutila_moduli(std::int64_t Q);
// nearest dyadic rational with 2^40 denominator
Rational dyadic_rational(double x);

double w_delta(double shift, double delta);

// --- shifted convolution

double shifted_sum_A(const CuspForm& f, const CuspForm& g, std::int64_t l1, std::int64_t l2, std::int64_t v, double x);

// --- large sieve

struct SieveInstance {
  std::int64_t r = 1, s = 1, w = 1;
  double V = 1, H = 1, Q = 1, D = 1;
  double Z = 1;
  std::vector<cplx> a;               // a[v - v_lo()]
  std::vector<std::vector<cplx>> b;  // b[h - h_lo()][d - d_lo()]

  std::int64_t v_lo() const;
  std::int64_t v_hi() const;
  std::int64_t h_lo() const;
  std::int64_t h_hi() const;
  std::int64_t d_lo() const;
  std::int64_t d_hi() const;
  std::int64_t q_lo() const;
  std::int64_t q_hi() const;

  // u(v,h,q,d) = uV(v) uH(h) uQ(q) uD(d), each a flat-top window on its dyadic box
  double uV(double v) const;
  double uH(double h) const;
  double uQ(double q) const;
  double uD(double d) const;
  double u(double v, double h, double q, double d) const { return uV(v) * uH(h) * uQ(q) * uD(d); }

  void validate() const;  // throws InvalidArgument
  void resize_tables();   // shapes a, b to the box, zero-filled
};

CEvalResult large_sieve_lhs(const SieveInstance& inst, int sign);
// r, s, w <= rsw_max with (r,s) = (w,rs) = 1; V, H log-uniform in [1, VH_max]; D log-uniform in
// [1, 20]; a, b standard complex Gaussian
SieveInstance random_sieve_instance(std::uint64_t seed, double Q, double Z, std::int64_t rsw_max = 10,
                                    double VH_max = 200);

inline constexpr double kim_sarnak_theta = 7.0 / 64.0;
double large_sieve_bound(const SieveInstance& inst, double theta = kim_sarnak_theta);

// --- cusp-pair Kloosterman identity

struct SSSReport {
  cplx direct = 0.0;
  cplx definition = 0.0;
  double max_term_diff = 0.0;
  std::int64_t terms = 0;
};

// sum over C <= C_max, (C, r) = 1 of (1/(s sqrt(r) C)) e(n sbar/r) S(m rbar, n; sC), against the
// parametrisation of the cusp 1/s
SSSReport sss_check(std::int64_t m, std::int64_t n, std::int64_t r, std::int64_t s, std::int64_t C_max);

}  // namespace rankinlab
