#include "iqlambda/quadforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "iqlambda/error.hpp"

namespace iqlambda {

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

// gcd with Bezout coefficients: u*a + v*b = g >= 0.
i128 xgcd(i128 a, i128 b, i128& u, i128& v)
{
    i128 u0 = 1, v0 = 0, u1 = 0, v1 = 1;
    while (b != 0) {
        i128 q = floor_div(a, b);
        i128 t = a - q * b;
        a = b;
        b = t;
        t = u0 - q * u1;
        u0 = u1;
        u1 = t;
        t = v0 - q * v1;
        v0 = v1;
        v1 = t;
    }
    if (a < 0) {
        a = -a;
        u0 = -u0;
        v0 = -v0;
    }
    u = u0;
    v = v0;
    return a;
}

QuadraticForm reduce128(i128 a, i128 b, i128 c) noexcept
{
    for (;;) {
        if (!(-a < b && b <= a)) {
            i128 two_a = 2 * a;
            i128 q = floor_div(b, two_a);
            i128 r = b - q * two_a;
            if (r > a) {
                r -= two_a;
                ++q;
            }
            c -= q * (b + r) / 2;
            b = r;
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if ((a == c || b == -a) && b < 0)
            b = -b;
        break;
    }
    return {Int(a), Int(b), Int(c)};
}

bool squarefree(Int n)
{
    for (const auto& pp : factorize(n).factors) {
        if (pp.exponent > 1)
            return false;
    }
    return true;
}

} // namespace

bool FundamentalDiscriminant::is_fundamental(Int D)
{
    if (D == 0)
        return false;
    if (mod(D, 4) == 1)
        return squarefree(D);
    if (mod(D, 4) != 0)
        return false;
    Int m = D / 4;
    return (mod(m, 4) == 2 || mod(m, 4) == 3) && squarefree(m);
}

FundamentalDiscriminant FundamentalDiscriminant::from(Int D)
{
    if (D >= 0 || !is_fundamental(D))
        raise(ErrorKind::PreconditionViolated, std::to_string(D) + " is not a negative fundamental discriminant");
    return FundamentalDiscriminant(D);
}

std::string RadicandField::label() const
{
    return "Q(√" + std::to_string(d0) + ")";
}

RadicandField fundamental_from_radicand(Int t, const Budget& budget)
{
    if (t > 0 && is_square(t))
        raise(ErrorKind::PerfectSquare, "radicand " + std::to_string(t) + " is a square");
    if (t >= 0)
        raise(ErrorKind::PreconditionViolated, "radicand must be negative");
    auto [d0, m] = squarefree_decompose(t, budget);
    Int D = mod(d0, 4) == 1 ? d0 : 4 * d0;
    return {FundamentalDiscriminant::from(D), d0, m};
}

bool QuadraticForm::is_reduced() const noexcept
{
    if (!(std::abs(b) <= a && a <= c))
        return false;
    if ((std::abs(b) == a || a == c) && b < 0)
        return false;
    return true;
}

QuadraticForm QuadraticForm::inverse() const noexcept
{
    return reduce({a, -b, c});
}

QuadraticForm reduce(const QuadraticForm& f) noexcept
{
    return reduce128(f.a, f.b, f.c);
}

QuadraticForm principal_form(FundamentalDiscriminant D) noexcept
{
    Int b = D.value() & 1;
    return {1, b, (b - D.value()) / 4};
}

QuadraticForm compose(const QuadraticForm& f, const QuadraticForm& g)
{
    if (f.discriminant() != g.discriminant())
        raise(ErrorKind::DiscriminantMismatch, "compose: discriminants differ");
    i128 a1 = f.a, b1 = f.b, a2 = g.a, b2 = g.b, c2 = g.c;
    if (a1 > a2) {
        std::swap(a1, a2);
        std::swap(b1, b2);
        c2 = f.c;
    }
    i128 s = (b1 + b2) / 2;
    i128 n = b2 - s;
    i128 y1 = 0, d = a1;
    if (a2 % a1 != 0) {
        i128 u, v;
        d = xgcd(a2, a1, u, v);
        y1 = u;
    }
    i128 x2 = 0, y2 = -1, d1 = d;
    if (s % d != 0) {
        i128 u, v;
        d1 = xgcd(s, d, u, v);
        x2 = u;
        y2 = -v;
    }
    i128 v1 = a1 / d1, v2 = a2 / d1;
    i128 r = (y1 * y2 * n - x2 * c2) % v1;
    if (r < 0)
        r += v1;
    i128 b3 = b2 + 2 * v2 * r;
    i128 a3 = v1 * v2;
    i128 c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    return reduce128(a3, b3, c3);
}

QuadraticForm power(const QuadraticForm& f, std::uint64_t e)
{
    const Int D = f.discriminant();
    Int b0 = D & 1;
    QuadraticForm result{1, b0, (b0 - D) / 4};
    QuadraticForm base = reduce(f);
    while (e) {
        if (e & 1)
            result = compose(result, base);
        e >>= 1;
        if (e)
            base = compose(base, base);
    }
    return result;
}

QuadraticForm prime_form(FundamentalDiscriminant D, Int p)
{
    if (splitting_type(D, p) != SplittingType::Split)
        raise(ErrorKind::NotSplit, std::to_string(p) + " does not split in discriminant " + std::to_string(D.value()));
    Int b = Int(sqrt_mod_prime(std::uint64_t(mod(D.value(), p)), std::uint64_t(p)));
    if ((b & 1) != (D.value() & 1))
        b = p - b;
    i128 c = (i128(b) * b - D.value()) / (4 * i128(p));
    return {p, b, Int(c)};
}

std::vector<QuadraticForm> reduced_forms(FundamentalDiscriminant D, const Budget& budget)
{
    const Int n = D.magnitude();
    if (n > budget.class_group_abs_disc)
        raise(ErrorKind::BudgetExceeded, "class group of |D| = " + std::to_string(n));
    const Int a_max = Int(isqrt(std::uint64_t(n / 3)));
    const Int parity = n & 1;
    std::vector<QuadraticForm> forms;
    for (Int a = 1; a <= a_max; ++a) {
        Int b = -a + 1;
        if ((b & 1) != parity)
            ++b;
        // t = (b^2 - D)/4 tracked exactly and modulo a
        Int t = (b * b + n) / 4;
        Int tm = t % a;
        for (; b <= a; b += 2) {
            if (tm == 0) {
                Int c = t / a;
                if (c > a || (c == a && b >= 0))
                    forms.push_back({a, b, c});
            }
            t += b + 1;
            tm += b + 1;
            if (tm >= a)
                tm -= a;
            if (tm >= a)
                tm -= a;
            if (tm < 0)
                tm += a;
        }
    }
    return forms;
}

ClassGroup::ClassGroup(FundamentalDiscriminant D, std::vector<QuadraticForm> forms)
    : D_(D), forms_(std::move(forms))
{
    const Int h = Int(forms_.size());
    if (h <= 1)
        return;
    const QuadraticForm identity = principal_form(D_);
    // exponents of the cyclic l-power factors, for each prime l | h
    std::map<Int, std::vector<int>> exponents;
    for (const auto& [ell, e] : factorize(h).factors) {
        Int m = h;
        for (int i = 0; i < e; ++i)
            m /= ell;
        std::vector<Int> hist(size_t(e) + 1, 0);
        for (const auto& g : forms_) {
            QuadraticForm x = power(g, std::uint64_t(m));
            int k = 0;
            while (x != identity && k < e) {
                x = power(x, std::uint64_t(ell));
                ++k;
            }
            if (x != identity)
                throw std::logic_error("class group: element order does not divide h");
            ++hist[size_t(k)];
        }
        // |G_l[l^k]| = l^{rank_1 + ... + rank_k}, rank_k = #{cyclic factors with exponent >= k}
        std::vector<int> rank(size_t(e) + 2, 0);
        Int prev = 1, cumulative = hist[0];
        for (int k = 1; k <= e; ++k) {
            cumulative += hist[size_t(k)];
            Int count = cumulative / m;
            Int ratio = count / prev;
            int r = 0;
            while (ratio > 1) {
                ratio /= ell;
                ++r;
            }
            rank[size_t(k)] = r;
            prev = count;
        }
        std::vector<int>& list = exponents[ell];
        for (int k = e; k >= 1; --k) {
            for (int j = 0; j < rank[size_t(k)] - rank[size_t(k) + 1]; ++j)
                list.push_back(k);
        }
    }
    size_t width = 0;
    for (const auto& [ell, list] : exponents)
        width = std::max(width, list.size());
    factors_.assign(width, 1);
    for (const auto& [ell, list] : exponents) {
        // list is descending; the largest exponent goes to the last factor
        for (size_t i = 0; i < list.size(); ++i) {
            for (int j = 0; j < list[i]; ++j)
                factors_[width - 1 - i] *= ell;
        }
    }
    Int product = 1;
    for (Int d : factors_)
        product *= d;
    if (product != h)
        throw std::logic_error("class group: invariant factors do not multiply to h");
}

std::optional<size_t> ClassGroup::index_of(const QuadraticForm& f) const
{
    QuadraticForm g = reduce(f);
    auto it = std::lower_bound(forms_.begin(), forms_.end(), g);
    if (it == forms_.end() || *it != g)
        return std::nullopt;
    return size_t(it - forms_.begin());
}

Int ClassGroup::element_order(const QuadraticForm& f) const
{
    const QuadraticForm identity = principal_form(D_);
    QuadraticForm g = reduce(f);
    Int order = h();
    for (const auto& [ell, e] : factorize(std::max<Int>(order, 1)).factors) {
        for (int i = 0; i < e; ++i) {
            if (power(g, std::uint64_t(order / ell)) != identity)
                break;
            order /= ell;
        }
    }
    return order;
}

ClassGroup class_group(FundamentalDiscriminant D, const Budget& budget)
{
    return ClassGroup(D, reduced_forms(D, budget));
}

SplittingType splitting_type(FundamentalDiscriminant D, Int q) noexcept
{
    switch (kronecker(D.value(), q)) {
    case 1: return SplittingType::Split;
    case -1: return SplittingType::Inert;
    default: return SplittingType::Ramified;
    }
}

Int ideal_class_order(FundamentalDiscriminant D, Int p, const Budget& budget)
{
    if (D.magnitude() > budget.class_group_abs_disc)
        raise(ErrorKind::BudgetExceeded, "class order for |D| = " + std::to_string(D.magnitude()));
    const QuadraticForm g = reduce(prime_form(D, p));
    const QuadraticForm identity = principal_form(D);
    if (D.magnitude() <= 4)
        return 1;
    const mpz_class bound = analytic_h_bound(D).get_num() / analytic_h_bound(D).get_den() + 1;
    const Int cap = bound.get_si();
    QuadraticForm x = g;
    for (Int s = 1; s <= cap; ++s) {
        if (x == identity)
            return s;
        x = compose(x, g);
    }
    throw std::logic_error("ideal_class_order: order exceeds the analytic class number bound");
}

namespace {

// Gauss reduction tracking the substitution matrix; returns (x, y) with f(x, y) = reduced.a.
struct TrackedForm {
    mpz_class a, b, c;
    mpz_class m11 = 1, m12 = 0, m21 = 0, m22 = 1;

    void translate()
    {
        // b -> b - 2aq with the representative in (-a, a]
        mpz_class two_a = 2 * a, q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), b.get_mpz_t(), two_a.get_mpz_t());
        if (r > a) {
            r -= two_a;
            q += 1;
        }
        c -= q * (b + r) / 2;
        b = r;
        m12 -= q * m11;
        m22 -= q * m21;
    }

    void swap_axes()
    {
        std::swap(a, c);
        b = -b;
        mpz_class t11 = m12, t21 = m22;
        m12 = -m11;
        m22 = -m21;
        m11 = t11;
        m21 = t21;
    }

    void run()
    {
        for (;;) {
            if (!(-a < b && b <= a))
                translate();
            if (a > c) {
                swap_axes();
                continue;
            }
            if ((a == c || b == -a) && b < 0)
                swap_axes();
            break;
        }
    }
};

void consider(const mpz_class& x, const mpz_class& y, Generator& best, bool& found)
{
    for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
            mpz_class X = sx * x, Y = sy * y;
            if (Y <= 0)
                continue;
            if (!found || Y < best.y || (Y == best.y && X >= 0 && best.x < 0)) {
                best = {X, Y};
                found = true;
            }
        }
    }
}

} // namespace

Generator principal_generator(FundamentalDiscriminant D, Int p, Int s, const Budget& budget)
{
    if (s < 1)
        raise(ErrorKind::PreconditionViolated, "principal_generator: exponent must be positive");
    mpz_class ps;
    mpz_ui_pow_ui(ps.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(s));
    mpz_class four_ps = 4 * ps;
    if (Int(mpz_sizeinbase(four_ps.get_mpz_t(), 2)) > budget.generator_max_bits)
        raise(ErrorKind::BudgetExceeded, "principal_generator: 4p^s exceeds the bit budget");

    mpz_class b = sqrt_mod_prime_power(D.value(), p, int(s));
    if (mpz_class(b % 2) != mpz_class(D.value() & 1))
        b += ps;
    mpz_class Dz = D.value();
    TrackedForm f{ps, b, (b * b - Dz) / four_ps};
    f.run();
    if (f.a != 1)
        raise(ErrorKind::NoRepresentation, "p^s is not principal for s = " + std::to_string(s));
    mpz_class x0 = 2 * ps * f.m11 + b * f.m21;
    mpz_class y0 = f.m21;
    if (x0 * x0 - Dz * y0 * y0 != four_ps)
        throw std::logic_error("principal_generator: norm check failed");

    Generator best;
    bool found = false;
    consider(x0, y0, best, found);
    if (D.value() == -4) {
        // multiplication by i in doubled coordinates: (X, Y) -> (-2Y, X/2)
        consider(-2 * y0, x0 / 2, best, found);
    } else if (D.value() == -3) {
        mpz_class x = x0, y = y0;
        for (int i = 0; i < 5; ++i) {
            mpz_class nx = (x - 3 * y) / 2, ny = (x + y) / 2;
            x = nx;
            y = ny;
            consider(x, y, best, found);
        }
    }
    return best;
}

Rational analytic_h_bound(FundamentalDiscriminant D)
{
    if (D.magnitude() <= 4)
        raise(ErrorKind::DomainTooSmall, "analytic bound needs |D| > 4");
    const long double n = static_cast<long double>(D.magnitude());
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double value = std::sqrt(n) / pi * (0.5L * std::log(n) + std::log(std::log(n)) + 2.8L);
    // round outward with a relative margin well above long double error
    const long double scaled = std::ceil(value * 1e9L * (1.0L + 1e-12L)) + 1.0L;
    mpz_class num = static_cast<unsigned long>(scaled);
    Rational bound(num + 1, mpz_class(1'000'000'000));
    bound.canonicalize();
    return bound;
}

std::string format_invariant_factors(const std::vector<Int>& factors)
{
    if (factors.empty())
        return "trivial";
    std::string out;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i)
            out += " x ";
        out += "Z/" + std::to_string(factors[i]) + "Z";
    }
    return out;
}

} // namespace iqlambda
