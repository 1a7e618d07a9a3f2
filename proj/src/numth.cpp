#include "iqlambda/numth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <tuple>

#include "iqlambda/error.hpp"

namespace iqlambda {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr Int kTrialLimit = 100'000;

const std::vector<Int>& small_primes()
{
    static const std::vector<Int> primes = primes_up_to(kTrialLimit);
    return primes;
}

u64 magnitude(Int n) noexcept
{
    return n < 0 ? u64(0) - u64(n) : u64(n);
}

bool miller_rabin(u64 n, u64 a) noexcept
{
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

// Brent's variant; returns a nontrivial factor or 0 when the attempt fails.
u64 pollard_brent(u64 n, u64 c, u64& spent, u64 limit)
{
    auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
    u64 y = 2, x = 2, q = 1, g = 1, ys = 2;
    u64 r = 1;
    constexpr u64 batch = 128;
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i)
            y = f(y);
        u64 k = 0;
        while (k < r && g == 1) {
            ys = y;
            u64 steps = std::min(batch, r - k);
            for (u64 i = 0; i < steps; ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
            k += steps;
            spent += steps;
            if (spent > limit)
                return 0;
        }
        r <<= 1;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

void split_cofactor(u64 n, std::vector<u64>& out, const Budget& budget, u64& spent)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 s = isqrt(n);
    if (s * s == n) {
        split_cofactor(s, out, budget, spent);
        split_cofactor(s, out, budget, spent);
        return;
    }
    for (u64 c = 1;; ++c) {
        if (spent >= budget.rho_iterations)
            raise(ErrorKind::BudgetExceeded, "factorize: rho effort exhausted for " + std::to_string(n));
        u64 g = pollard_brent(n, c, spent, budget.rho_iterations);
        if (g != 0) {
            split_cofactor(g, out, budget, spent);
            split_cofactor(n / g, out, budget, spent);
            return;
        }
    }
}

} // namespace

u64 mulmod(u64 a, u64 b, u64 m) noexcept
{
    return u64((u128(a) * b) % m);
}

u64 powmod(u64 base, u64 e, u64 m) noexcept
{
    if (m == 1)
        return 0;
    u64 result = 1;
    base %= m;
    while (e) {
        if (e & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return result;
}

Int mod(Int a, Int m) noexcept
{
    Int r = a % m;
    return r < 0 ? r + m : r;
}

Int gcd(Int a, Int b) noexcept
{
    return Int(std::gcd(magnitude(a), magnitude(b)));
}

Int inverse_mod(Int a, Int m)
{
    Int g = m, x = 0, x1 = 1, a1 = mod(a, m);
    while (a1 != 0) {
        Int q = g / a1;
        std::tie(g, a1) = std::make_tuple(a1, g - q * a1);
        std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
    }
    if (g != 1)
        raise(ErrorKind::PreconditionViolated, "inverse_mod: not invertible");
    return mod(x, m);
}

u64 isqrt(u64 n) noexcept
{
    if (n == 0)
        return 0;
    u64 r = u64(std::sqrt(static_cast<long double>(n)));
    while (u128(r) * r > n)
        --r;
    while (u128(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

bool is_square(Int n) noexcept
{
    if (n < 0)
        return false;
    u64 r = isqrt(u64(n));
    return r * r == u64(n);
}

int kronecker(Int a, Int n) noexcept
{
    static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0)
        return 0;
    u64 b = magnitude(n);
    int k = 1;
    int v = std::countr_zero(b);
    b >>= v;
    if (v & 1)
        k = tab2[a & 7];
    if (n < 0 && a < 0)
        k = -k;
    // (a / b) for odd b > 0 depends only on a mod b
    u64 x = a >= 0 ? u64(a) % b : (b - magnitude(a) % b) % b;
    while (x != 0) {
        int w = std::countr_zero(x);
        x >>= w;
        if (w & 1)
            k *= tab2[b & 7];
        if (x & b & 2)
            k = -k;
        u64 r = b % x;
        b = x;
        x = r;
    }
    return b == 1 ? k : 0;
}

std::vector<Int> primes_up_to(Int limit)
{
    std::vector<Int> primes;
    if (limit < 2)
        return primes;
    std::vector<bool> composite(size_t(limit) + 1, false);
    for (Int i = 2; i <= limit; ++i) {
        if (composite[size_t(i)])
            continue;
        primes.push_back(i);
        for (Int j = i * i; j <= limit; j += i)
            composite[size_t(j)] = true;
    }
    return primes;
}

bool is_prime(u64 n) noexcept
{
    if (n < 2)
        return false;
    static constexpr u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : bases) {
        if (n % p == 0)
            return n == p;
    }
    for (u64 a : bases) {
        if (!miller_rabin(n, a))
            return false;
    }
    return true;
}

Factorization factorize(Int n, const Budget& budget)
{
    if (n == 0)
        raise(ErrorKind::PreconditionViolated, "factorize: zero");
    Factorization result;
    result.sign = n < 0 ? -1 : 1;
    u64 rest = magnitude(n);
    for (Int p : small_primes()) {
        if (u64(p) * u64(p) > rest)
            break;
        if (rest % u64(p) != 0)
            continue;
        int e = 0;
        while (rest % u64(p) == 0) {
            rest /= u64(p);
            ++e;
        }
        result.factors.push_back({p, e});
    }
    if (rest == 1)
        return result;
    std::vector<u64> big;
    u64 spent = 0;
    split_cofactor(rest, big, budget, spent);
    std::sort(big.begin(), big.end());
    for (u64 q : big) {
        if (!result.factors.empty() && u64(result.factors.back().prime) == q)
            ++result.factors.back().exponent;
        else
            result.factors.push_back({Int(q), 1});
    }
    return result;
}

SquarefreePart squarefree_decompose(Int n, const Budget& budget)
{
    Factorization f = factorize(n, budget);
    Int d0 = f.sign, m = 1;
    for (const auto& [q, e] : f.factors) {
        if (e & 1)
            d0 *= q;
        for (int i = 0; i < e / 2; ++i)
            m *= q;
    }
    return {d0, m};
}

std::vector<Int> divisors(const Factorization& f)
{
    std::vector<Int> out{1};
    for (const auto& [q, e] : f.factors) {
        size_t base = out.size();
        Int pw = 1;
        for (int i = 1; i <= e; ++i) {
            pw *= q;
            for (size_t j = 0; j < base; ++j)
                out.push_back(out[j] * pw);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int moebius(const Factorization& f) noexcept
{
    for (const auto& pp : f.factors) {
        if (pp.exponent > 1)
            return 0;
    }
    return (f.factors.size() & 1) ? -1 : 1;
}

Rational bernoulli(int n, const Budget& budget)
{
    if (n < 0)
        raise(ErrorKind::PreconditionViolated, "bernoulli: negative index");
    if (n > budget.bernoulli_max_index)
        raise(ErrorKind::BudgetExceeded, "bernoulli: index " + std::to_string(n));
    if (n >= 3 && (n & 1))
        return 0;

    static std::shared_mutex lock;
    static std::vector<Rational> cache{Rational(1), Rational(-1, 2)};
    {
        std::shared_lock read(lock);
        if (size_t(n) < cache.size())
            return cache[size_t(n)];
    }
    std::unique_lock write(lock);
    while (cache.size() <= size_t(n)) {
        const size_t m = cache.size();
        if (m >= 3 && (m & 1)) {
            cache.emplace_back(0);
            continue;
        }
        // sum_{k<m} C(m+1, k) B_k + (m+1) B_m = 0
        Rational sum = 0;
        mpz_class binom = 1;
        for (size_t k = 0; k < m; ++k) {
            if (sgn(cache[k]) != 0)
                sum += binom * cache[k];
            binom = binom * mpz_class(m + 1 - k) / mpz_class(k + 1);
        }
        Rational b = -sum / mpz_class(m + 1);
        b.canonicalize();
        cache.push_back(b);
    }
    return cache[size_t(n)];
}

u64 sqrt_mod_prime(u64 a, u64 p)
{
    a %= p;
    if (p == 2 || a == 0)
        return a;
    if (powmod(a, (p - 1) / 2, p) != 1)
        raise(ErrorKind::NotSplit, "sqrt_mod_prime: nonresidue");
    if (p % 4 == 3)
        return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1)
        ++z;
    u64 m = u64(s), c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, t2 = t;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j)
            b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

mpz_class sqrt_mod_prime_power(Int D, Int p, int k)
{
    if (kronecker(D, p) != 1)
        raise(ErrorKind::NotSplit, "D=" + std::to_string(D) + " is not a nonzero square mod " + std::to_string(p));
    mpz_class modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    mpz_class d = D;
    mpz_class r = static_cast<unsigned long>(sqrt_mod_prime(u64(mod(D, p)), u64(p)));
    // Newton iteration doubles the p-adic precision each step
    for (int prec = 1; prec < k; prec *= 2) {
        mpz_class inv, twice = 2 * r;
        mpz_invert(inv.get_mpz_t(), twice.get_mpz_t(), modulus.get_mpz_t());
        r -= (r * r - d) * inv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
    }
    return r;
}

Int hensel_sqrt_mod_p2(Int D, Int p)
{
    mpz_class r = sqrt_mod_prime_power(D, p, 2);
    Int r0 = r.get_si(), p2 = p * p;
    return std::min(r0, p2 - r0);
}

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

} // namespace iqlambda
