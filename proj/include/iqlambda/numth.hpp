#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "iqlambda/budget.hpp"

namespace iqlambda {

using Int = std::int64_t;
using Rational = mpq_class;

struct PrimePower {
    Int prime;
    int exponent;
    bool operator==(const PrimePower&) const = default;
};

struct Factorization {
    int sign = 1;
    std::vector<PrimePower> factors;  // ascending by prime
};

int kronecker(Int a, Int n) noexcept;

bool is_prime(std::uint64_t n) noexcept;
Factorization factorize(Int n, const Budget& budget = {});

struct SquarefreePart {
    Int d0;
    Int m;
};
// n = d0 * m^2 with d0 squarefree and sign(d0) = sign(n).
SquarefreePart squarefree_decompose(Int n, const Budget& budget = {});

// B_0 = 1, B_1 = -1/2.
Rational bernoulli(int n, const Budget& budget = {});

// Smaller of the two square roots of D modulo p^2.
Int hensel_sqrt_mod_p2(Int D, Int p);

// A square root of D modulo p^k for an odd prime p not dividing D.
mpz_class sqrt_mod_prime_power(Int D, Int p, int k);

// Modular helpers on 64-bit moduli.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) noexcept;
Int mod(Int a, Int m) noexcept;  // result in [0, m)
Int inverse_mod(Int a, Int m);
std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p);

std::uint64_t isqrt(std::uint64_t n) noexcept;
bool is_square(Int n) noexcept;
Int gcd(Int a, Int b) noexcept;

std::vector<Int> primes_up_to(Int limit);
std::vector<Int> divisors(const Factorization& f);
int moebius(const Factorization& f) noexcept;

std::string to_string(const Rational& q);

} // namespace iqlambda
