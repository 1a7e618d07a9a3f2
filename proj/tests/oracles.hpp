#pragma once

// Brute-force reference implementations. Deliberately naive and independent of the library code paths.

#include <cstdint>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Int = std::int64_t;

inline int kronecker(Int a, Int n)
{
    return mpz_kronecker(mpz_class(a).get_mpz_t(), mpz_class(n).get_mpz_t());
}

inline bool is_prime(Int n)
{
    if (n < 2)
        return false;
    for (Int d = 2; d * d <= n; ++d) {
        if (n % d == 0)
            return false;
    }
    return true;
}

inline std::vector<std::pair<Int, int>> trial_factor(Int n)
{
    std::vector<std::pair<Int, int>> out;
    if (n < 0)
        n = -n;
    for (Int d = 2; d * d <= n; ++d) {
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e)
            out.emplace_back(d, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

inline bool squarefree(Int n)
{
    for (auto [q, e] : trial_factor(n)) {
        if (e > 1)
            return false;
    }
    return true;
}

inline bool fundamental(Int D)
{
    if (D % 4 == 1 || D % 4 == -3)
        return squarefree(D);
    if (D % 4 != 0)
        return false;
    const Int m = D / 4;
    const Int r = ((m % 4) + 4) % 4;
    return (r == 2 || r == 3) && squarefree(m);
}

// Reduced forms by the textbook conditions, no incremental tricks.
inline std::set<std::tuple<Int, Int, Int>> reduced_forms(Int D)
{
    std::set<std::tuple<Int, Int, Int>> out;
    for (Int a = 1; 3 * a * a <= -D; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            const Int num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            const Int c = num / (4 * a);
            if (c < a || (c == a && b < 0))
                continue;
            out.emplace(a, b, c);
        }
    }
    return out;
}

// Akiyama-Tanigawa, returns B_n with B_1 = -1/2.
inline mpq_class bernoulli(int n)
{
    std::vector<mpq_class> a(size_t(n) + 1);
    for (int m = 0; m <= n; ++m) {
        a[size_t(m)] = mpq_class(1, m + 1);
        for (int j = m; j >= 1; --j) {
            a[size_t(j) - 1] = j * (a[size_t(j) - 1] - a[size_t(j)]);
            a[size_t(j) - 1].canonicalize();
        }
    }
    mpq_class b = a[0];
    return n == 1 ? -b : b;
}

inline mpz_class binomial(int n, int k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

// B_{n,chi} = f^(n-1) sum_a chi(a) B_n(a / f) with the Bernoulli polynomial.
inline mpq_class generalized_bernoulli(int n, Int D)
{
    const Int f = D < 0 ? -D : D;
    std::vector<mpq_class> B(size_t(n) + 1);
    for (int k = 0; k <= n; ++k)
        B[size_t(k)] = bernoulli(k);
    mpq_class sum = 0;
    for (Int a = 1; a <= f; ++a) {
        const int chi = f == 1 ? 1 : kronecker(D, a);
        if (chi == 0)
            continue;
        mpq_class x{mpz_class(a), mpz_class(f)};
        x.canonicalize();
        mpq_class poly = 0, xp = 1;
        for (int k = n; k >= 0; --k) {
            poly += mpq_class(binomial(n, k)) * B[size_t(k)] * xp;
            xp *= x;
        }
        sum += chi * poly;
    }
    mpz_class fp;
    mpz_pow_ui(fp.get_mpz_t(), mpz_class(f).get_mpz_t(), static_cast<unsigned long>(n - 1));
    mpq_class r = sum * mpq_class(fp);
    r.canonicalize();
    return r;
}

// Ascending y search for x^2 + |D| y^2 = 4 p^s.
inline std::pair<mpz_class, mpz_class> generator_by_search(Int D, Int p, int s)
{
    mpz_class target;
    mpz_pow_ui(target.get_mpz_t(), mpz_class(p).get_mpz_t(), static_cast<unsigned long>(s));
    target *= 4;
    for (mpz_class y = 1; mpz_class(-D) * y * y <= target; ++y) {
        mpz_class rem = target - mpz_class(-D) * y * y;
        if (mpz_perfect_square_p(rem.get_mpz_t())) {
            mpz_class x;
            mpz_sqrt(x.get_mpz_t(), rem.get_mpz_t());
            return {x, y};
        }
    }
    return {0, 0};
}

inline Int powmod(Int b, Int e, Int m)
{
    mpz_class r;
    mpz_powm(r.get_mpz_t(), mpz_class(b).get_mpz_t(), mpz_class(e).get_mpz_t(), mpz_class(m).get_mpz_t());
    return r.get_si();
}

} // namespace oracle
