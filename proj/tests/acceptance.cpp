// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

#include "rankinlab/arith.hpp"
#include "rankinlab/forms.hpp"
#include "rankinlab/lfunc.hpp"
#include "rankinlab/traceverify.hpp"
#include "rankinlab/transforms.hpp"
#include "rankinlab/typecalc.hpp"

using namespace rankinlab;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

template <class F>
void guarded(int id, const std::string& name, F body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, name, std::string("threw ") + e.what());
  }
}

void kloosterman_paths() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::int64_t c = 1; c <= 500; ++c)
    for (std::int64_t m = 1; m <= 20; ++m)
      for (std::int64_t n = 1; n <= 20; ++n)
        worst = std::max(worst, std::abs(kloosterman(m, n, c).value - kloosterman_direct(m, n, c).value));
  double t = seconds_since(t0);
  report(1, worst <= 1e-9 && t < 30.0, "Kloosterman fast path vs direct (c<=500, m,n<=20)",
         fmt("max |diff| = %.2e, %.1f s for both paths", worst, t));
}

void weil_bound() {
  long violations = 0, checked = 0;
  double worst = 0.0;
  for (std::int64_t p : primes_up_to(2000))
    for (std::int64_t m = 1; m <= 3; ++m)
      for (std::int64_t n = 1; n <= 3; ++n) {
        if ((m * n) % p == 0) continue;
        double r = std::abs(kloosterman(m, n, p).value) / (2.0 * std::sqrt(static_cast<double>(p)));
        worst = std::max(worst, r);
        violations += r > 1.0;
        ++checked;
      }
  report(2, violations == 0, "Weil bound at primes p<=2000",
         fmt("%ld sums, %ld violations, max |S|/2sqrt(p) = %.6f", checked, violations, worst));
}

void ramanujan_identity() {
  long mismatches = 0;
  double worst = 0.0;
  for (std::int64_t d = 1; d <= 500; ++d) {
    const auto& roots = roots_of_unity(d);
    for (std::int64_t k = -50; k <= 50; ++k) {
      cplx s = 0.0;
      for (std::int64_t a = 1; a <= d; ++a)
        if (std::gcd(a, d) == 1) s += roots[mul_mod(a, mod_reduce(k, d), d)];
      std::int64_t c = ramanujan(k, d);
      worst = std::max(worst, std::abs(s - static_cast<double>(c)));
      mismatches += std::llround(s.real()) != c || std::abs(s - static_cast<double>(c)) > 1e-8;
    }
  }
  report(3, mismatches == 0, "Ramanujan sums: divisor formula vs unit sum (d<=500, |k|<=50)",
         fmt("%ld mismatches, max residual %.2e", mismatches, worst));
}

void hecke_relations() {
  // eta-product oracle: q prod (1 - q^n)^24
  const int N = 901;
  std::vector<__int128> p(N, 0);
  p[0] = 1;
  for (int n = 1; n < N; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (int i = N - 1; i >= n; --i) p[i] -= p[i - n];
  auto tau = ramanujan_tau(900);
  bool eta_ok = true;
  for (int n = 1; n <= 900; ++n) eta_ok = eta_ok && tau[n] == p[n - 1];
  auto f = delta_oracle(900);
  auto r = hecke_check(f, 30, 30);
  bool ok = eta_ok && tau[2] == -24 && tau[3] == 252 && r.max_relative <= 1e-9;
  report(4, ok, "Hecke relations for Delta (m,n<=30) and eta-product tau",
         fmt("max relative violation %.2e over %lld pairs; tau(2) = %lld, tau(3) = %lld", r.max_relative,
             static_cast<long long>(r.checked), static_cast<long long>(tau[2]), static_cast<long long>(tau[3])) +
             (eta_ok ? "; tau(1..900) equals the eta product" : "; eta product MISMATCH"));
}

void petersson() {
  auto t0 = std::chrono::steady_clock::now();
  auto rep = petersson_rank1_check(delta_oracle(100), 10, 5000);
  double t = seconds_since(t0);
  bool ok = rep.max_factor_defect < 1e-6 && rep.max_lambda_defect < 1e-6 && t < 60.0;
  report(5, ok, "Petersson rank-1 check (level 1, k=12, grid 10, c<=5000)",
         fmt("factor defect %.2e, lambda defect %.2e, R(1,1) = %.14f, %.1f s", rep.max_factor_defect,
             rep.max_lambda_defect, rep.R11, t));
}

void voronoi() {
  auto t0 = std::chrono::steady_clock::now();
  auto f = delta_oracle(100000);
  double worst = 0.0;
  int cases = 0;
  for (double X : {5.0, 20.0, 50.0}) {
    auto h = SmoothWindow::gaussian(X, X / 8.0);
    for (std::int64_t q : {1, 2, 3, 5})
      for (std::int64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        auto l = voronoi_lhs(f, a, q, h);
        auto r = voronoi_rhs(f, a, q, h);
        worst = std::max(worst, std::abs(l.value - r.value) / std::abs(l.value));
        ++cases;
      }
  }
  double t = seconds_since(t0);
  report(6, worst <= 1e-3 && t < 300.0, "Voronoi summation for Delta (q in {1,2,3,5}, X in {5,20,50})",
         fmt("%d cases, max relative difference %.2e, %.1f s", cases, worst, t));
}

void jutila() {
  bool ok = true;
  std::string detail;
  for (std::int64_t Q : {20, 50, 100}) {
    auto qs = jutila_moduli(Q);
    for (int which = 0; which < 2; ++which) {
      Rational delta = which == 0 ? Rational(1, Q * Q) : dyadic_rational(std::pow(static_cast<double>(Q), -1.5));
      auto I = jutila_build(qs, delta);
      double err = static_cast<double>(jutila_l2_error(I));
      double bound = jutila_bound(static_cast<double>(Q), I);
      bool unit = I.integral() == 1;
      ok = ok && unit && err <= bound;
      detail += fmt("Q=%lld %s err/bound=%.3g%s; ", static_cast<long long>(Q), which == 0 ? "delta=Q^-2" : "delta~Q^-1.5",
                    err / bound, unit ? "" : " (integral != 1)");
    }
  }
  report(7, ok, "Jutila L2 error <= 10Q^2/(delta Lambda^2), integral exactly 1", detail.substr(0, detail.size() - 2));
}

void transform_decay() {
  auto w = SmoothWindow::bump(100, 200, 1);
  const double scale = std::log(100.0) / 100.0;
  double C = 0.0, far = 0.0;
  for (int l = 1; l <= 200; ++l) C = std::max(C, std::abs(transform_tilde(w, l).value) / scale);
  for (int l : {1000, 1500, 2000, 4000}) far = std::max(far, std::abs(transform_tilde(w, l).value));
  double Chat = 0.0;
  for (double t : {0.5, 1.0, 5.0}) Chat = std::max(Chat, std::abs(transform_hat(w, t).value) / scale);
  // large |t| against (Z/|t|)^2 for the unit-scale bump
  auto one = SmoothWindow::bump(1, 2, 1);
  double h150 = std::max(std::abs(transform_hat(one, 150.0).value), std::abs(transform_hat(one, -150.0).value));
  bool ok = C <= 100.0 && far < 1e-8 && Chat <= 100.0 && h150 < std::pow(1.0 / 150.0, 2);
  report(8, ok, "Bessel transform decay (bump on [100,200], Z=1)",
         fmt("tilde C = %.3f (l<=200), max |tilde| for l>=1000 = %.1e, hat C = %.3f (t=0.5,1,5), |hat(150)| = %.2e vs %.2e",
             C, far, Chat, h150, std::pow(1.0 / 150.0, 2)));
}

void large_sieve() {
  const std::uint64_t base = 20240901;
  double worst = 0.0;
  int trials = 0;
  std::uint64_t worst_seed = 0;
  for (double Q : {10.0, 30.0})
    for (double Z : {1.0, 4.0})
      for (int i = 0; i < 50; ++i) {
        std::uint64_t seed = base + static_cast<std::uint64_t>(trials);
        auto in = random_sieve_instance(seed, Q, Z, 10, 200);
        if (i % 2) {
          // odd trials use random signs instead of Gaussians
          std::mt19937_64 rng(seed ^ 0x5bd1e995u);
          std::bernoulli_distribution coin(0.5);
          for (auto& x : in.a) x = coin(rng) ? 1.0 : -1.0;
          for (auto& row : in.b)
            for (auto& x : row) x = coin(rng) ? 1.0 : -1.0;
        }
        double bound = large_sieve_bound(in, kim_sarnak_theta);
        for (int sign : {1, -1}) {
          double ratio = std::abs(large_sieve_lhs(in, sign).value) / bound;
          if (ratio > worst) {
            worst = ratio;
            worst_seed = seed;
          }
        }
        ++trials;
      }
  report(9, worst <= 100.0, "Large sieve: |S+-| <= 100 x bound over 200 random instances",
         fmt("seeds %llu..%llu, worst ratio %.3e (seed %llu)", static_cast<unsigned long long>(base),
             static_cast<unsigned long long>(base + trials - 1), worst, static_cast<unsigned long long>(worst_seed)));
}

void second_moment() {
  const std::int64_t cmax = 4000;
  auto h = SmoothWindow::bump(1, 2, 1);
  auto f = delta_oracle(100);
  double R11 = petersson_geometric_R(1, 1, 12, 1, cmax).value;
  auto m = second_moment_geometric(f, 12, 1, h, 10, cmax);
  double s = smoothed_pair_sum(f, f, h, 10);
  double diff = std::abs(m.value - R11 * s * s);
  bool positive = true;
  double worst_neg = 0.0;
  for (std::int64_t M : {1, 2, 3, 5})
    for (double X : {5.0, 10.0, 20.0}) {
      auto r = second_moment_geometric(f, 12, M, h, X, cmax);
      positive = positive && r.value >= -r.truncation_error;
      worst_neg = std::min(worst_neg, r.value + r.truncation_error);
    }
  report(10, diff <= 1e-4 && positive, "Second moment: geometric side vs R(1,1)|sum|^2, positivity",
         fmt("geometric %.10f, R(1,1) s^2 %.10f, |diff| %.2e; positivity ", m.value, R11 * s * s, diff) +
             (positive ? std::string("holds on M in {1,2,3,5}, X in {5,10,20}") : fmt("fails (min %.2e)", worst_neg)));
}

void afe() {
  auto D = std::make_shared<const CuspForm>(delta_oracle(10));
  auto pair = make_rs_pair(D, D);
  AFEConfig cfg;
  cfg.A0 = 4;
  double q = q_inf(0.5, pair);
  auto v1 = afe_weight_V(0.5, 1.0, pair, cfg);
  auto vf = afe_weight_V(0.5, 100.0 * q, pair, cfg);
  double ratio = std::abs(vf.value) / std::abs(v1.value);
  AFEConfig fine = cfg;
  fine.refine = 4.0;
  double worst = 0.0;
  bool stable = true;
  for (double y : {1e-3, 0.1, 1.0, 10.0, q, 10.0 * q, 100.0 * q}) {
    auto a = afe_weight_V(0.5, y, pair, cfg), b = afe_weight_V(0.5, y, pair, fine);
    double d = std::abs(a.value - b.value);
    stable = stable && d <= a.abs_err;
    worst = std::max(worst, d / std::max(a.abs_err, 1e-300));
  }
  report(11, ratio < 1e-6 && stable, "AFE weight decay and refinement stability (A0=4)",
         fmt("|V(100 sqrt q)|/|V(1)| = %.2e (sqrt q = %.1f); max refinement change / abs_err = %.3f", ratio, q, worst));
}

void type_calculus() {
  bool ok = true;
  std::string detail;
  for (const auto& fx : all_fixtures()) {
    auto rep = verify_type(fx.tf, fx.indices, 16, 1, 1e3);
    bool good = rep.pass == fx.expect_pass;
    ok = ok && good;
    detail += fmt("%s C=%.3g %s%s; ", fx.name.c_str(), rep.C, rep.pass ? "passes" : "fails", good ? "" : " (unexpected)");
  }
  report(12, ok, "Type calculus fixtures (wrong fixture must fail)", detail.substr(0, detail.size() - 2));
}

}  // namespace

int main() {
  set_max_threads(1);
  std::printf("rankinlab acceptance run (single worker)\n");
  guarded(1, "Kloosterman", kloosterman_paths);
  guarded(2, "Weil", weil_bound);
  guarded(3, "Ramanujan", ramanujan_identity);
  guarded(4, "Hecke", hecke_relations);
  guarded(5, "Petersson", petersson);
  guarded(6, "Voronoi", voronoi);
  guarded(7, "Jutila", jutila);
  guarded(8, "Transforms", transform_decay);
  guarded(9, "Large sieve", large_sieve);
  guarded(10, "Second moment", second_moment);
  guarded(11, "AFE", afe);
  guarded(12, "Type calculus", type_calculus);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
