#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rankinlab/arith.hpp"

using namespace rankinlab;

namespace {

// independent oracles: plain loops over residues
cplx kloosterman_oracle(std::int64_t m, std::int64_t n, std::int64_t c) {
  cplx s = 0.0;
  for (std::int64_t a = 0; a < c; ++a) {
    if (std::gcd(a, c) != 1) continue;
    std::int64_t ab = 1;
    while ((a * ab) % c != 1 % c) ++ab;
    std::int64_t t = ((m % c + c) % c * a + (n % c + c) % c * ab) % c;
    s += std::polar(1.0, 2.0 * pi * static_cast<double>(t) / static_cast<double>(c));
  }
  return s;
}

std::int64_t units(std::int64_t n) {
  std::int64_t k = 0;
  for (std::int64_t a = 1; a <= n; ++a) k += std::gcd(a, n) == 1;
  return k;
}

}  // namespace

TEST_CASE("factorize") {
  CHECK(factorize(1).empty());
  auto f12 = factorize(12);
  REQUIRE(f12.size() == 2);
  CHECK(f12[0].p == 2);
  CHECK(f12[0].e == 2);
  CHECK(f12[1].p == 3);
  CHECK(f12[1].e == 1);
  auto f = factorize(4875);
  REQUIRE(f.size() == 3);
  CHECK((f[0].p == 3 && f[0].e == 1));
  CHECK((f[1].p == 5 && f[1].e == 3));
  CHECK((f[2].p == 13 && f[2].e == 1));
  for (std::int64_t n = 1; n <= 3000; ++n) {
    auto g = factorize(n);
    CHECK(factor_value(g) == n);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i - 1].p < g[i].p);
    for (const auto& pp : g) CHECK(is_prime(pp.p));
  }
  CHECK(factor_value(factorize(999999000001LL)) == 999999000001LL);
}

TEST_CASE("mobius, phi, tau") {
  CHECK(mobius(1) == 1);
  CHECK(mobius(4) == 0);
  CHECK(mobius(30) == -1);
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(12) == 4);
  CHECK(divisor_tau(1) == 1);
  CHECK(divisor_tau(12) == 6);
  for (std::int64_t p : primes_up_to(200)) {
    CHECK(euler_phi(p) == p - 1);
    CHECK(divisor_tau(p) == 2);
  }
  for (std::int64_t n = 1; n <= 300; ++n) {
    CHECK(euler_phi(n) == units(n));
    std::int64_t sum = 0, cnt = 0;
    for (std::int64_t d = 1; d <= n; ++d)
      if (n % d == 0) {
        sum += mobius(d);
        ++cnt;
      }
    CHECK(sum == (n == 1 ? 1 : 0));
    CHECK(divisor_tau(n) == cnt);
    CHECK(static_cast<std::int64_t>(divisors(n).size()) == cnt);
  }
}

TEST_CASE("mod_inverse") {
  CHECK(mod_inverse(1, 9) == 1);
  CHECK(mod_inverse(3, 7) == 5);
  CHECK_THROWS_AS(mod_inverse(2, 4), Error);
  try {
    mod_inverse(2, 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInvertible);
  }
  for (std::int64_t c = 2; c <= 60; ++c)
    for (std::int64_t a = -70; a <= 70; ++a)
      if (std::gcd(a, c) == 1) CHECK(mod_reduce(a * mod_inverse(a, c), c) == 1);
}

TEST_CASE("kloosterman_direct") {
  CHECK(kloosterman_direct(1, 1, 1).value == doctest::Approx(1.0));
  CHECK(kloosterman_direct(1, 1, 3).value == doctest::Approx(-1.0));
  for (std::int64_t c = 1; c <= 60; ++c)
    for (std::int64_t m = -3; m <= 5; ++m) {
      auto a = kloosterman_direct(m, 2, c).value;
      CHECK(a == doctest::Approx(kloosterman_direct(2, m, c).value).epsilon(1e-12));
      CHECK(std::abs(a - kloosterman_oracle(m, 2, c).real()) < 1e-9);
    }
  for (std::int64_t c = 1; c <= 500; ++c) CHECK(kloosterman_direct(1, 3, c).residual_imag < 1e-9);
}

TEST_CASE("kloosterman fast path") {
  CHECK(kloosterman(1, 1, 1).value == doctest::Approx(1.0));
  CHECK(kloosterman(1, 1, 15).value == doctest::Approx(kloosterman_direct(1, 1, 15).value).epsilon(1e-12));
  for (std::int64_t c = 1; c <= 120; ++c)
    for (std::int64_t n = 1; n <= 6; ++n)
      CHECK(std::abs(kloosterman(0, n, c).value - static_cast<double>(ramanujan(n, c))) < 1e-9);
  for (std::int64_t c = 1; c <= 200; ++c)
    for (std::int64_t m : {1, 2, 6, 7, 12})
      for (std::int64_t n : {1, 3, 4, 9, 10})
        CHECK(std::abs(kloosterman(m, n, c).value - kloosterman_direct(m, n, c).value) < 1e-9);
}

TEST_CASE("twisted multiplicativity") {
  for (std::int64_t c1 = 2; c1 <= 40; ++c1)
    for (std::int64_t c2 = 2; c2 <= 40; c2 += 3) {
      if (std::gcd(c1, c2) != 1) continue;
      for (std::int64_t m : {1, 5}) {
        std::int64_t n = 3;
        std::int64_t i2 = mod_inverse(c2, c1), i1 = mod_inverse(c1, c2);
        double lhs = kloosterman_direct(m, n, c1 * c2).value;
        double rhs = kloosterman_direct(mul_mod(m, mul_mod(i2, i2, c1), c1), n, c1).value *
                     kloosterman_direct(mul_mod(m, mul_mod(i1, i1, c2), c2), n, c2).value;
        CHECK(std::abs(lhs - rhs) < 1e-9);
      }
    }
}

TEST_CASE("Weil bound at primes") {
  for (std::int64_t p : primes_up_to(600))
    for (std::int64_t m = 1; m <= 3; ++m)
      for (std::int64_t n = 1; n <= 3; ++n) {
        if ((m * n) % p == 0) continue;
        CHECK(std::abs(kloosterman(m, n, p).value) <= 2.0 * std::sqrt(static_cast<double>(p)) + 1e-9);
      }
}

TEST_CASE("ramanujan sums") {
  for (std::int64_t k = -5; k <= 5; ++k) CHECK(ramanujan(k, 1) == 1);
  for (std::int64_t d = 1; d <= 100; ++d) CHECK(ramanujan(1, d) == mobius(d));
  CHECK(ramanujan(6, 4) == -2);
  for (std::int64_t d = 1; d <= 120; ++d)
    for (std::int64_t k = -20; k <= 20; ++k) {
      cplx s = 0.0;
      for (std::int64_t a = 1; a <= d; ++a)
        if (std::gcd(a, d) == 1) s += std::polar(1.0, 2.0 * pi * static_cast<double>(a * k) / static_cast<double>(d));
      CHECK(std::llround(s.real()) == ramanujan(k, d));
    }
}

TEST_CASE("roots of unity table") {
  const auto& r = roots_of_unity(12);
  REQUIRE(r.size() == 12);
  CHECK(std::abs(r[3] - cplx(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(r[0] - cplx(1.0, 0.0)) < 1e-15);
}
