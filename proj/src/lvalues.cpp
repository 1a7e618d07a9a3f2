#include "iqlambda/lvalues.hpp"

#include <map>
#include <numeric>

#include "iqlambda/error.hpp"

namespace iqlambda {

namespace {

void check_disc(Int disc)
{
    if (disc != 1 && !FundamentalDiscriminant::is_fundamental(disc))
        raise(ErrorKind::PreconditionViolated, std::to_string(disc) + " is not a fundamental discriminant");
}

std::optional<Int> merge_level(std::optional<Int> a, std::optional<Int> b)
{
    if (a && b)
        return std::lcm(*a, *b);
    return a ? a : b;
}

} // namespace

Rational generalized_bernoulli(int n, Int disc, const Budget& budget)
{
    if (n < 1)
        raise(ErrorKind::PreconditionViolated, "generalized_bernoulli: n must be positive");
    if (n > budget.gen_bernoulli_max_n)
        raise(ErrorKind::BudgetExceeded, "generalized_bernoulli: n = " + std::to_string(n));
    const Int f = disc < 0 ? -disc : disc;
    if (f > budget.lvalue_abs_disc)
        raise(ErrorKind::BudgetExceeded, "generalized_bernoulli: conductor " + std::to_string(f));
    check_disc(disc);

    // S_j = sum_{a=1}^{f} chi(a) a^j
    std::vector<mpz_class> S(size_t(n) + 1, 0);
    mpz_class pw;
    for (Int a = 1; a <= f; ++a) {
        int chi = kronecker(disc, a);
        if (chi == 0)
            continue;
        pw = 1;
        for (int j = 0; j <= n; ++j) {
            if (chi > 0)
                S[size_t(j)] += pw;
            else
                S[size_t(j)] -= pw;
            if (j < n)
                mpz_mul_ui(pw.get_mpz_t(), pw.get_mpz_t(), static_cast<unsigned long>(a));
        }
    }
    // B_{n,chi} = sum_k C(n,k) B_k f^{k-1} S_{n-k}
    Rational total = 0;
    mpz_class binom = 1, fpow = 1;  // fpow = f^k
    for (int k = 0; k <= n; ++k) {
        Rational bk = bernoulli(k, budget);
        if (sgn(bk) != 0 && sgn(S[size_t(n - k)]) != 0) {
            Rational term = bk * binom * fpow * S[size_t(n - k)];
            total += term;
        }
        binom = binom * (n - k) / (k + 1);
        fpow *= f;
    }
    total /= mpz_class(f);
    total.canonicalize();
    return total;
}

Rational generalized_bernoulli(int n, FundamentalDiscriminant D, const Budget& budget)
{
    return generalized_bernoulli(n, D.value(), budget);
}

Rational l_value_neg(int n, Int disc, const Budget& budget)
{
    Rational v = -generalized_bernoulli(n, disc, budget) / mpz_class(n);
    v.canonicalize();
    return v;
}

Rational l_value_neg(int n, FundamentalDiscriminant D, const Budget& budget)
{
    return l_value_neg(n, D.value(), budget);
}

Rational cohen_h(int r, Int N, const Budget& budget)
{
    if (r < 2 || N < 0)
        raise(ErrorKind::PreconditionViolated, "cohen_h: need r >= 2 and N >= 0");
    if (N == 0) {
        Rational v = -bernoulli(2 * r, budget) / mpz_class(2 * r);
        v.canonicalize();
        return v;
    }
    const Int t = (r & 1) ? -N : N;
    if (mod(t, 4) == 2 || mod(t, 4) == 3)
        return 0;
    auto [d0, m] = squarefree_decompose(t, budget);
    Int D = d0;
    if (mod(d0, 4) != 1) {
        D = 4 * d0;
        m /= 2;
    }
    const Rational L = l_value_neg(r, D, budget);
    const Factorization fm = factorize(m, budget);
    mpz_class sum = 0;
    for (Int d : divisors(fm)) {
        const int mu = moebius(factorize(d, budget));
        const int chi = kronecker(D, d);
        if (mu == 0 || chi == 0)
            continue;
        // sigma_{2r-1}(m/d)
        mpz_class sigma = 0, term;
        for (Int e : divisors(factorize(m / d, budget))) {
            mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(2 * r - 1));
            sigma += term;
        }
        mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(r - 1));
        sum += mu * chi * term * sigma;
    }
    Rational v = L * sum;
    v.canonicalize();
    return v;
}

Int alpha(Int p) noexcept
{
    return p == 3 ? 14 : 6 * (2 * p + 1);
}

QSeries QSeries::zero(Int bound, std::optional<Int> level)
{
    QSeries s;
    s.bound = bound;
    s.coefficients.assign(size_t(bound) + 1, Rational(0));
    s.level_tag = level;
    return s;
}

bool QSeries::operator==(const QSeries& other) const
{
    return bound == other.bound && coefficients == other.coefficients;
}

QSeries build_scaled_series(Int p, Int bound, const Budget& budget)
{
    QSeries g = QSeries::zero(bound, 4);
    const Int a = alpha(p);
    for (Int N = 0; N <= bound; ++N) {
        Rational c = a * cohen_h(int(p), N, budget) / mpz_class(p);
        c.canonicalize();
        if (N > 0 && kronecker(-N, p) == 1 && c.get_den() != 1)
            raise(ErrorKind::IntegralityViolation,
                  "alpha(p)H(p,N)/p not integral at p = " + std::to_string(p) + ", N = " + std::to_string(N));
        g[N] = c;
    }
    return g;
}

int Character::operator()(Int N) const noexcept
{
    switch (kind) {
    case Kind::Legendre: return kronecker(N, prime);
    case Kind::Psi4:
        if ((N & 1) == 0)
            return 0;
        return mod(N, 4) == 1 ? 1 : -1;
    case Kind::Chi8: return kronecker(8, N);
    }
    return 0;
}

Int Character::conductor() const noexcept
{
    switch (kind) {
    case Kind::Legendre: return prime;
    case Kind::Psi4: return 4;
    case Kind::Chi8: return 8;
    }
    return 1;
}

QSeries series_twist(const QSeries& g, Character chi)
{
    std::optional<Int> level;
    if (g.level_tag)
        level = *g.level_tag * chi.conductor() * chi.conductor();
    QSeries out = QSeries::zero(g.bound, level);
    for (Int N = 0; N <= g.bound; ++N) {
        int c = chi(N);
        if (c != 0 && sgn(g[N]) != 0)
            out[N] = c > 0 ? g[N] : Rational(-g[N]);
    }
    return out;
}

QSeries series_u(const QSeries& g, Int l)
{
    std::optional<Int> level;
    if (g.level_tag)
        level = *g.level_tag * l;
    QSeries out = QSeries::zero(g.bound / l, level);
    for (Int N = 0; N <= out.bound; ++N)
        out[N] = g[l * N];
    return out;
}

QSeries series_v(const QSeries& g, Int l)
{
    std::optional<Int> level;
    if (g.level_tag)
        level = *g.level_tag * l;
    QSeries out = QSeries::zero(g.bound * l, level);
    for (Int N = 0; N <= g.bound; ++N)
        out[l * N] = g[N];
    return out;
}

QSeries series_combine(const Rational& a, const QSeries& g, const Rational& b, const QSeries& h)
{
    QSeries out = QSeries::zero(std::min(g.bound, h.bound), merge_level(g.level_tag, h.level_tag));
    for (Int N = 0; N <= out.bound; ++N) {
        Rational v = a * g[N] + b * h[N];
        v.canonicalize();
        out[N] = v;
    }
    return out;
}

CongruenceResult congruence_check(const QSeries& g, const QSeries& h, Int modulus, Int upto)
{
    if (upto > g.bound || upto > h.bound)
        raise(ErrorKind::PreconditionViolated, "congruence_check: upto exceeds a series bound");
    const mpz_class m = modulus;
    auto residue = [&](const Rational& q, Int N) {
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), q.get_den().get_mpz_t(), m.get_mpz_t()) == 0)
            raise(ErrorKind::NonIntegralCoefficient, "coefficient at N = " + std::to_string(N) +
                                                         " has denominator sharing a factor with the modulus");
        mpz_class r = q.get_num() * inv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
        return r;
    };
    CongruenceResult result;
    for (Int N = 0; N <= upto; ++N) {
        mpz_class rg = residue(g[N], N), rh = residue(h[N], N);
        if (rg != rh) {
            result.pass = false;
            result.index = N;
            result.residue_g = rg;
            result.residue_h = rh;
            return result;
        }
    }
    return result;
}

SturmData sturm_data(Int k_times_2, const mpz_class& N1)
{
    if (k_times_2 < 1 || N1 < 1)
        raise(ErrorKind::PreconditionViolated, "sturm_data: weight and level must be positive");
    if ((k_times_2 & 1) && mpz_class(N1 % 4) != 0)
        raise(ErrorKind::PreconditionViolated, "sturm_data: half-integral weight needs 4 | N1");
    // N1 * prod (1 + 1/q) = prod q^(e-1) (q + 1)
    mpz_class rest = N1, index = 1;
    for (unsigned long q = 2; rest > 1; ++q) {
        if (mpz_class(q) * q > rest) {
            index *= rest + 1;  // remaining cofactor is prime
            break;
        }
        if (mpz_divisible_ui_p(rest.get_mpz_t(), q) == 0)
            continue;
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), q);
        index *= q + 1;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), q)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), q);
            index *= q;
        }
    }
    Rational bound(index * k_times_2, 24);
    bound.canonicalize();
    return {index, bound};
}

namespace {

void check_prime_sets(Int p, const std::set<Int>& splus, const std::set<Int>& sminus, Int Q)
{
    for (Int r : splus) {
        if (r == 2 || !is_prime(std::uint64_t(r)) || sminus.count(r))
            raise(ErrorKind::PreconditionViolated, "prime sets must be disjoint sets of odd primes");
    }
    for (Int r : sminus) {
        if (r == 2 || !is_prime(std::uint64_t(r)))
            raise(ErrorKind::PreconditionViolated, "prime sets must be disjoint sets of odd primes");
    }
    if (Q == 2 || !is_prime(std::uint64_t(Q)) || splus.count(Q) || sminus.count(Q))
        raise(ErrorKind::PreconditionViolated, "Q must be an odd prime outside both sets");
    if (!splus.count(p))
        raise(ErrorKind::PreconditionViolated, "p must lie in the split set");
}

void check_mod_class(ModClass ab)
{
    if (!(ab == ModClass{1, 8} || ab == ModClass{5, 8} || ab == ModClass{8, 16}))
        raise(ErrorKind::PreconditionViolated, "(A, B) must be (1,8), (5,8) or (8,16)");
}

} // namespace

KappaConstants kappa_constants(Int p, const std::set<Int>& splus, const std::set<Int>& sminus, Int Q, ModClass ab)
{
    check_prime_sets(p, splus, sminus, Q);
    check_mod_class(ab);
    std::set<Int> all = splus;
    all.insert(sminus.begin(), sminus.end());
    all.insert(Q);
    const int m4 = (ab.A == 1 || ab.A == 5) ? 10 : 6;
    mpz_class product = 1, P1 = 1, radical = 1;
    for (Int r : all) {
        mpz_class rz = r;
        product *= rz * rz * rz * (rz + 1);
        P1 *= rz * rz * rz * rz;
        radical *= rz;
    }
    KappaConstants k;
    k.kappa = 1 + (mpz_class(1) << m4) * (2 * p + 1) * product;
    k.P1 = P1;
    k.P2 = (ab == ModClass{8, 16}) ? P1 * 1024 : P1 * 16384;
    k.P3 = ab.B * radical;
    return k;
}

QSeries eisenstein_pipeline(const QSeries& g, const std::set<Int>& splus, const std::set<Int>& sminus, Int Q,
                            ModClass ab)
{
    check_mod_class(ab);
    const Rational half(1, 2);
    std::map<Int, int> targets;
    for (Int r : splus)
        targets[r] = 1;
    for (Int r : sminus)
        targets[r] = -1;
    targets[Q] = -1;

    QSeries G = g;
    for (const auto& [r, target] : targets) {
        // (-N/r) = target  <=>  (N/r) = target * (-1/r)
        const int delta = target * kronecker(-1, r);
        QSeries T = series_twist(G, Character::legendre(r));
        G = series_combine(half, series_twist(T, Character::legendre(r)), Rational(delta, 2), T);
    }
    if (ab.B == 8) {
        const int delta = ab.A == 1 ? 1 : -1;
        QSeries T = series_twist(G, Character::chi8());
        return series_combine(half, series_twist(T, Character::chi8()), Rational(delta, 2), T);
    }
    // 4 | N, then keep N = 8 mod 16
    QSeries G6 = series_combine(1, G, 1, series_twist(G, Character::psi4()));
    QSeries eights = series_v(series_u(G6, 8), 8);
    QSeries sixteens = series_v(series_u(G6, 16), 16);
    return series_combine(1, eights, -1, sixteens);
}

QSeries direct_filter(const QSeries& g, const std::set<Int>& splus, const std::set<Int>& sminus, Int Q,
                      ModClass ab)
{
    check_mod_class(ab);
    QSeries out = QSeries::zero(g.bound, g.level_tag);
    for (Int N = 1; N <= g.bound; ++N) {
        if (mod(N + ab.A, ab.B) != 0)
            continue;
        bool keep = kronecker(-N, Q) == -1;
        for (Int r : splus)
            keep = keep && kronecker(-N, r) == 1;
        for (Int r : sminus)
            keep = keep && kronecker(-N, r) == -1;
        if (keep)
            out[N] = g[N];
    }
    return out;
}

} // namespace iqlambda
