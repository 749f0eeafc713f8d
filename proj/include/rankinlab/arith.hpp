#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rankinlab/common.hpp"

namespace rankinlab {

struct PrimePower {
  std::int64_t p;
  int e;
};

// prime factorization, primes strictly increasing
using Factorization = std::vector<PrimePower>;

Factorization factorize(std::int64_t n);
bool is_prime(std::int64_t n);
std::int64_t factor_value(const Factorization& f);

int mobius(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);
std::int64_t divisor_tau(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
// least nonnegative residue of a mod c
std::int64_t mod_reduce(std::int64_t a, std::int64_t c);
std::int64_t mod_inverse(std::int64_t a, std::int64_t c);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t c);

struct ExpSumValue {
  double value = 0.0;
  double residual_imag = 0.0;
};

ExpSumValue kloosterman_direct(std::int64_t m, std::int64_t n, std::int64_t c);
ExpSumValue kloosterman(std::int64_t m, std::int64_t n, std::int64_t c);
std::int64_t ramanujan(std::int64_t k, std::int64_t d);

// table of exp(2 pi i j / c), j = 0..c-1; cached per thread
const std::vector<cplx>& roots_of_unity(std::int64_t c);

std::vector<std::int64_t> primes_up_to(std::int64_t n);

}  // namespace rankinlab
