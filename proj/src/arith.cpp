#include "rankinlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace rankinlab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t mod_reduce(std::int64_t a, std::int64_t c) {
  std::int64_t r = a % c;
  return r < 0 ? r + c : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t c) {
  return static_cast<std::int64_t>(static_cast<u128>(mod_reduce(a, c)) * static_cast<u128>(mod_reduce(b, c)) %
                                   static_cast<u128>(c));
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t c) {
  if (c < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be >= 1");
  if (c == 1) return 0;
  std::int64_t r0 = mod_reduce(a, c), r1 = c;
  __int128 s0 = 1, s1 = 0;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    __int128 s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw Error(ErrorKind::NotInvertible, "gcd(a, c) > 1");
  __int128 r = s0 % c;
  if (r < 0) r += c;
  return static_cast<std::int64_t>(r);
}

// --- primality and factorization

namespace {

u64 pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = static_cast<u64>(static_cast<u128>(r) * b % m);
    b = static_cast<u64>(static_cast<u128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic for n < 2^64
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int r = 1; r < s; ++r) {
      x = static_cast<u64>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 rng(n);
  while (true) {
    u64 c = rng() % (n - 1) + 1;
    u64 x = rng() % n, y = x, d = 1;
    auto f = [&](u64 v) { return static_cast<u64>((static_cast<u128>(v) * v + c) % n); };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void split(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (miller_rabin(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  split(d, out);
  split(n / d, out);
}

}  // namespace

bool is_prime(std::int64_t n) { return n >= 2 && miller_rabin(static_cast<u64>(n)); }

Factorization factorize(std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "factorize requires n >= 1");
  Factorization f;
  u64 m = static_cast<u64>(n);
  for (u64 p = 2; p <= 1000000 && p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.push_back({static_cast<std::int64_t>(p), e});
  }
  if (m > 1) {
    std::vector<u64> ps;
    split(m, ps);
    std::sort(ps.begin(), ps.end());
    for (u64 p : ps) {
      if (!f.empty() && f.back().p == static_cast<std::int64_t>(p))
        ++f.back().e;
      else
        f.push_back({static_cast<std::int64_t>(p), 1});
    }
  }
  return f;
}

std::int64_t factor_value(const Factorization& f) {
  std::int64_t v = 1;
  for (auto [p, e] : f)
    for (int i = 0; i < e; ++i) v *= p;
  return v;
}

int mobius(std::int64_t n) {
  int s = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    s = -s;
  }
  return s;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

std::int64_t divisor_tau(std::int64_t n) {
  std::int64_t r = 1;
  for (auto [p, e] : factorize(n)) r *= e + 1;
  return r;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> d{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t sz = d.size();
    std::int64_t pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < sz; ++j) d.push_back(d[j] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> ps;
  if (n < 2) return ps;
  std::vector<bool> comp(static_cast<std::size_t>(n + 1), false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    ps.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) comp[j] = true;
  }
  return ps;
}

// --- exponential sums

const std::vector<cplx>& roots_of_unity(std::int64_t c) {
  thread_local std::unordered_map<std::int64_t, std::vector<cplx>> cache;
  thread_local std::size_t cached_entries = 0;
  auto it = cache.find(c);
  if (it != cache.end()) return it->second;
  if (cached_entries > (1u << 23)) {
    cache.clear();
    cached_entries = 0;
  }
  std::vector<cplx> t(static_cast<std::size_t>(c));
  // symmetric fill keeps conj(t[j]) == t[c-j] bit for bit
  for (std::int64_t j = 0; 2 * j <= c; ++j) {
    double ang = 2.0 * pi * static_cast<double>(j) / static_cast<double>(c);
    t[j] = cplx(std::cos(ang), std::sin(ang));
    if (j > 0) t[c - j] = std::conj(t[j]);
  }
  cached_entries += t.size();
  return cache.emplace(c, std::move(t)).first->second;
}

ExpSumValue kloosterman_direct(std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be >= 1");
  if (c == 1) return {1.0, 0.0};
  const auto& tab = roots_of_unity(c);
  std::int64_t mr = mod_reduce(m, c), nr = mod_reduce(n, c);
  double re = 0.0, im = 0.0;
  for (std::int64_t a = 1; a < c; ++a) {
    if (std::gcd(a, c) != 1) continue;
    std::int64_t ab = mod_inverse(a, c);
    std::int64_t ph = static_cast<std::int64_t>((static_cast<u128>(nr) * a + static_cast<u128>(mr) * ab) % c);
    re += tab[ph].real();
    im += tab[ph].imag();
  }
  return {re, std::abs(im)};
}

ExpSumValue kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
  if (c < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be >= 1");
  auto f = factorize(c);
  if (f.size() <= 1) return kloosterman_direct(m, n, c);
  // S(m,n;c) = prod_i S(m * conj(c/q_i)^2, n; q_i) over prime powers q_i || c
  double val = 1.0, resid = 0.0;
  for (auto [p, e] : f) {
    std::int64_t q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    std::int64_t rest_inv = mod_inverse(mod_reduce(c / q, q), q);
    std::int64_t mm = mul_mod(mul_mod(m, rest_inv, q), rest_inv, q);
    auto s = kloosterman_direct(mm, n, q);
    resid = resid * std::abs(s.value) + s.residual_imag * (std::abs(val) + resid);
    val *= s.value;
  }
  return {val, resid};
}

std::int64_t ramanujan(std::int64_t k, std::int64_t d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "ramanujan requires d >= 1");
  std::int64_t g = std::gcd(k < 0 ? -k : k, d);
  std::int64_t s = 0;
  for (std::int64_t c : divisors(g)) s += c * mobius(d / c);
  return s;
}

}  // namespace rankinlab
