#include <doctest.h>

#include <random>

#include "iqlambda/error.hpp"
#include "iqlambda/numth.hpp"
#include "oracles.hpp"

using namespace iqlambda;

TEST_CASE("kronecker examples")
{
    CHECK(kronecker(-23, 3) == 1);
    CHECK(kronecker(-23, 5) == -1);
    CHECK(kronecker(-3, 13) == 1);
    for (Int D : {-3, -4, -8, -23, 5, 12})
        CHECK(kronecker(D, 1) == 1);
    CHECK(kronecker(-4, 2) == 0);
    CHECK(kronecker(-8, 0) == 0);
    CHECK(kronecker(1, 0) == 1);
}

TEST_CASE("kronecker agrees with GMP on a grid")
{
    for (Int a = -60; a <= 60; ++a) {
        for (Int n = -60; n <= 60; ++n)
            CHECK_MESSAGE(kronecker(a, n) == oracle::kronecker(a, n), "a=" << a << " n=" << n);
    }
}

TEST_CASE("kronecker is completely multiplicative in n")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Int> dist(-5000, 5000);
    std::uniform_int_distribution<Int> nd(1, 3000);
    for (int i = 0; i < 3000; ++i) {
        const Int D = dist(rng), m = nd(rng), n = nd(rng);
        CHECK(kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n));
    }
}

TEST_CASE("kronecker is periodic mod |D| for fundamental D")
{
    for (Int D : {-3, -4, -7, -8, -15, -20, -23, -24, -84, -391}) {
        for (Int n = 1; n < 400; ++n) {
            if (gcd(n, D) == 1)
                CHECK(kronecker(D, n) == kronecker(D, n + (-D)));
        }
    }
}

TEST_CASE("is_prime matches trial division and GMP")
{
    for (Int n = 0; n < 20000; ++n)
        CHECK_MESSAGE(is_prime(std::uint64_t(n)) == oracle::is_prime(n), n);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t n = rng() >> 1;
        mpz_class z;
        mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
        CHECK(is_prime(n) == (mpz_probab_prime_p(z.get_mpz_t(), 40) != 0));
    }
    CHECK(is_prime((1ULL << 61) - 1));
    CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to 2, 3, 5, 7
}

TEST_CASE("factorize examples")
{
    const Factorization a = factorize(-2186);
    CHECK(a.sign == -1);
    CHECK(a.factors == std::vector<PrimePower>{{2, 1}, {1093, 1}});
    CHECK(factorize(6560).factors == std::vector<PrimePower>{{2, 5}, {5, 1}, {41, 1}});
    const Factorization one = factorize(1);
    CHECK(one.sign == 1);
    CHECK(one.factors.empty());
    CHECK_THROWS_AS(factorize(0), Error);
}

TEST_CASE("factorize round-trips and matches trial division")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Int> dist(-2'000'000'000, 2'000'000'000);
    for (int i = 0; i < 300; ++i) {
        Int n = dist(rng);
        if (n == 0)
            continue;
        const Factorization f = factorize(n);
        const auto ref = oracle::trial_factor(n);
        REQUIRE(f.factors.size() == ref.size());
        for (size_t k = 0; k < ref.size(); ++k) {
            CHECK(f.factors[k].prime == ref[k].first);
            CHECK(f.factors[k].exponent == ref[k].second);
        }
        CHECK(f.sign == (n < 0 ? -1 : 1));
    }
}

TEST_CASE("factorize handles 64-bit semiprimes via rho")
{
    const Int p = 1000000007, q = 998244353;
    const Factorization f = factorize(p * q);
    CHECK(f.factors == std::vector<PrimePower>{{q, 1}, {p, 1}});
    const Int big = 4611686014132420609LL;  // (2^31 - 1)^2
    CHECK(factorize(big).factors == std::vector<PrimePower>{{2147483647, 2}});
    mpz_class prod = 1;
    for (const auto& pp : factorize(9223372036854775807LL).factors) {
        CHECK(is_prime(std::uint64_t(pp.prime)));
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), mpz_class(pp.prime).get_mpz_t(), static_cast<unsigned long>(pp.exponent));
        prod *= pw;
    }
    CHECK(prod == mpz_class("9223372036854775807"));
}

TEST_CASE("factorize respects the rho budget")
{
    Budget tight;
    tight.rho_iterations = 10;
    const Int n = Int(1000000007) * 998244353;
    try {
        factorize(n, tight);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BudgetExceeded);
    }
}

TEST_CASE("squarefree_decompose examples and round trip")
{
    auto check = [](Int n, Int d0, Int m) {
        const SquarefreePart s = squarefree_decompose(n);
        CHECK(s.d0 == d0);
        CHECK(s.m == m);
    };
    check(-242, -2, 11);
    check(-121, -1, 11);
    check(-2186, -2186, 1);
    for (Int n = -3000; n <= 3000; ++n) {
        if (n == 0)
            continue;
        const SquarefreePart s = squarefree_decompose(n);
        CHECK(s.d0 * s.m * s.m == n);
        CHECK(s.m > 0);
        CHECK((s.d0 < 0) == (n < 0));
        CHECK(oracle::squarefree(s.d0));
    }
}

TEST_CASE("bernoulli examples")
{
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(1) == mpq_class(-1, 2));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(4) == mpq_class(-1, 30));
    CHECK(bernoulli(12) == mpq_class(-691, 2730));
}

TEST_CASE("bernoulli agrees with Akiyama-Tanigawa and von Staudt-Clausen")
{
    for (int n = 0; n <= 60; ++n) {
        const Rational b = bernoulli(n);
        CHECK_MESSAGE(b == oracle::bernoulli(n), n);
        if (n >= 3 && n % 2 == 1)
            CHECK(b == 0);
        if (n >= 2 && n % 2 == 0) {
            mpz_class den = 1;
            for (Int q = 2; q <= n + 1; ++q) {
                if (oracle::is_prime(q) && n % (q - 1) == 0)
                    den *= q;
            }
            CHECK_MESSAGE(b.get_den() == den, n);
        }
    }
}

TEST_CASE("bernoulli budget")
{
    Budget small;
    small.bernoulli_max_index = 100;
    CHECK_THROWS_AS(bernoulli(101, small), Error);
    CHECK_THROWS_AS(bernoulli(10001), Error);
}

TEST_CASE("hensel_sqrt_mod_p2 examples")
{
    CHECK(hensel_sqrt_mod_p2(-3, 13) == 45);
    CHECK(hensel_sqrt_mod_p2(-4, 13) == 29);
    CHECK(hensel_sqrt_mod_p2(-8, 3) == 1);
    try {
        hensel_sqrt_mod_p2(-23, 5);
        FAIL("expected NotSplit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotSplit);
    }
}

TEST_CASE("hensel_sqrt_mod_p2 matches exhaustive search")
{
    for (Int p : {3, 5, 7, 11, 13, 23, 101}) {
        const Int p2 = p * p;
        for (Int D = -400; D < 0; ++D) {
            if (oracle::kronecker(D, p) != 1)
                continue;
            Int best = -1;
            for (Int r = 0; r < p2 && best < 0; ++r) {
                if (mod(r * r - D, p2) == 0)
                    best = r;
            }
            const Int r = hensel_sqrt_mod_p2(D, p);
            CHECK(r == best);
            CHECK(mod(r * r - D, p2) == 0);
            CHECK(mod((r % p) * (r % p) - D, p) == 0);
        }
    }
}

TEST_CASE("sqrt_mod_prime_power lifts to higher powers")
{
    for (Int p : {3, 5, 7, 13}) {
        for (Int D : {-2, -11, -23, -35, -56}) {
            if (kronecker(D, p) != 1)
                continue;
            for (int k = 1; k <= 12; ++k) {
                const mpz_class r = sqrt_mod_prime_power(D, p, k);
                mpz_class pk;
                mpz_pow_ui(pk.get_mpz_t(), mpz_class(p).get_mpz_t(), static_cast<unsigned long>(k));
                CHECK(mpz_class((r * r - D) % pk) == 0);
            }
        }
    }
}

TEST_CASE("modular helpers")
{
    CHECK(powmod(2, 25, 169) == 158);
    CHECK(powmod(11, 12, 169) == 131);
    CHECK(inverse_mod(2, 9) == 5);
    CHECK(mod(-7, 5) == 3);
    CHECK(isqrt(99) == 9);
    CHECK(is_square(144));
    CHECK_FALSE(is_square(-4));
    CHECK(primes_up_to(30) == std::vector<Int>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(moebius(factorize(30)) == -1);
    CHECK(moebius(factorize(12)) == 0);
    CHECK(divisors(factorize(12)) == std::vector<Int>{1, 2, 3, 4, 6, 12});
    CHECK(to_string(mpq_class(-691, 2730)) == "-691/2730");
    CHECK(to_string(mpq_class(9)) == "9");
}
