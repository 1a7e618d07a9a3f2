#include "iqlambda/families.hpp"

#include <algorithm>
#include <map>

#include "iqlambda/error.hpp"
#include "iqlambda/lambda.hpp"

namespace iqlambda {

namespace {

constexpr Int kASetLimit = 100'000'000;

Int checked_power(Int p, int n, const Budget& budget)
{
    Int v = 1;
    for (int i = 0; i < n; ++i) {
        if (v > budget.power_max_abs / p)
            raise(ErrorKind::BudgetExceeded, std::to_string(p) + "^" + std::to_string(n) + " exceeds the integer budget");
        v *= p;
    }
    return v;
}

bool is_composite(int n)
{
    return n > 3 && !is_prime(std::uint64_t(n));
}

bool in_a_set(Int a, Int p, Int pn)
{
    if (a <= 0 || a >= 2 * pn || a % p == 0)
        return false;
    const std::uint64_t p2 = std::uint64_t(p * p);
    return powmod(std::uint64_t(a), std::uint64_t(p - 1), p2) == 1;
}

// (u + v sqrt(d))^e
Element power_in_order(const Element& base, Int d, Int e)
{
    Element result{1, 0}, b = base;
    while (e) {
        if (e & 1)
            result = {result.x * b.x + d * result.y * b.y, result.x * b.y + result.y * b.x};
        e >>= 1;
        if (e)
            b = {b.x * b.x + d * b.y * b.y, 2 * b.x * b.y};
    }
    return result;
}

} // namespace

std::string_view to_string(FamilyKind kind) noexcept
{
    switch (kind) {
    case FamilyKind::OneMinus4Pn: return "one-minus-4pn";
    case FamilyKind::SandsASq: return "a-sq-minus-4p2n";
    case FamilyKind::OneMinusPn: return "one-minus-pn";
    case FamilyKind::FourMinusPn: return "four-minus-pn";
    case FamilyKind::Q1SqMinusPn: return "q1sq-minus-pn";
    case FamilyKind::FourQ1SqMinusPn: return "four-q1sq-minus-pn";
    }
    return "";
}

std::optional<FamilyKind> parse_family_kind(std::string_view name) noexcept
{
    for (FamilyKind k : {FamilyKind::OneMinus4Pn, FamilyKind::SandsASq, FamilyKind::OneMinusPn,
                         FamilyKind::FourMinusPn, FamilyKind::Q1SqMinusPn, FamilyKind::FourQ1SqMinusPn}) {
        if (to_string(k) == name)
            return k;
    }
    return std::nullopt;
}

std::vector<Int> a_set(Int p, int n, const Budget& budget)
{
    if (p < 3 || !is_prime(std::uint64_t(p)) || n < 2)
        raise(ErrorKind::PreconditionViolated, "a_set needs an odd prime p and n >= 2");
    const Int pn = checked_power(p, n, budget);
    if (pn > kASetLimit / 2)
        raise(ErrorKind::BudgetExceeded, "a_set: 2p^n too large to enumerate");
    std::vector<Int> out;
    for (Int a = 1; a < 2 * pn; ++a) {
        if (in_a_set(a, p, pn))
            out.push_back(a);
    }
    return out;
}

FamilyMember member(FamilyKind kind, Int p, int n, std::optional<Int> a_or_q1, const Budget& budget)
{
    if (p < 3 || !is_prime(std::uint64_t(p)) || n < 2)
        raise(ErrorKind::PreconditionViolated, "member needs an odd prime p and n >= 2");
    const Int pn = checked_power(p, n, budget);
    Int t = 0;
    switch (kind) {
    case FamilyKind::OneMinus4Pn:
        if (pn > budget.power_max_abs / 4)
            raise(ErrorKind::BudgetExceeded, "4p^n exceeds the integer budget");
        t = 1 - 4 * pn;
        break;
    case FamilyKind::SandsASq: {
        if (!a_or_q1 || gcd(p, n) != 1 || !in_a_set(*a_or_q1, p, pn))
            raise(ErrorKind::PreconditionViolated, "SandsASq needs gcd(p, n) = 1 and a in A_{p,n}");
        const Int p2n = checked_power(p, 2 * n, budget);
        if (p2n > budget.power_max_abs / 4)
            raise(ErrorKind::BudgetExceeded, "4p^(2n) exceeds the integer budget");
        t = (*a_or_q1) * (*a_or_q1) - 4 * p2n;
        break;
    }
    case FamilyKind::OneMinusPn: t = 1 - pn; break;
    case FamilyKind::FourMinusPn: t = 4 - pn; break;
    case FamilyKind::Q1SqMinusPn:
    case FamilyKind::FourQ1SqMinusPn: {
        if (!a_or_q1)
            a_or_q1 = find_q1(p);
        const Int q = *a_or_q1;
        if (q < 2 || !is_prime(std::uint64_t(q)) || (p - 2) % q != 0)
            raise(ErrorKind::PreconditionViolated, "q1 must be a prime factor of p - 2");
        t = (kind == FamilyKind::Q1SqMinusPn ? q * q : 4 * q * q) - pn;
        break;
    }
    }
    if (t >= 0)
        raise(ErrorKind::PreconditionViolated, "radicand " + std::to_string(t) + " is not negative");
    FamilyMember m{kind, p, n, a_or_q1, t, fundamental_from_radicand(t, budget)};
    if (kronecker(m.D().value(), p) != 1)
        throw std::logic_error("member: p does not split in the family field");
    return m;
}

OrderCheck verify_order(const FamilyMember& m, const Budget& budget)
{
    OrderCheck check{ideal_class_order(m.D(), m.p, budget), std::nullopt, {}};
    const Int p = m.p;
    const int n = m.n;
    const bool gaussian = m.D().value() == -4;
    switch (m.kind) {
    case FamilyKind::OneMinusPn:
        if (p % 4 != 3 || n % 2 == 0) {
            check.note = "order stated only for p = 3 mod 4 and odd n";
        } else if (p == 3 && n == 5) {
            check.expected = 1;
            check.note = "exception: Q(sqrt(-2)) has class number 1";
        } else {
            check.expected = n;
        }
        break;
    case FamilyKind::Q1SqMinusPn:
        if (p % 4 == 3 && wieferich(p) && n % 2 == 1 && is_composite(n))
            check.expected = n;
        else
            check.note = "order stated only for Wieferich p = 3 mod 4 and odd composite n";
        break;
    case FamilyKind::FourMinusPn:
        if (p % 4 != 1)
            check.note = "order stated only for p = 1 mod 4";
        else if (gaussian)
            check.note = "excluded field Q(sqrt(-1))";
        else
            check.expected = n;
        break;
    case FamilyKind::FourQ1SqMinusPn:
        if (p % 4 == 1 && wieferich(p) && is_composite(n) && !gaussian)
            check.expected = n;
        else
            check.note = "order stated only for Wieferich p = 1 mod 4, composite n, field other than Q(sqrt(-1))";
        break;
    case FamilyKind::OneMinus4Pn:
        if (n > 8)
            check.expected = n;
        else
            check.note = "order stated only for n > 8";
        break;
    case FamilyKind::SandsASq: check.note = "no order statement for this family"; break;
    }
    return check;
}

std::vector<std::pair<int, int>> collision_scan(FamilyKind kind, Int p, int n_lo, int n_hi,
                                                const std::vector<int>& skip, std::optional<Int> a_or_q1,
                                                const Budget& budget)
{
    std::map<Int, std::vector<int>> by_disc;
    for (int n = n_lo; n <= n_hi; ++n) {
        if (std::find(skip.begin(), skip.end(), n) != skip.end())
            continue;
        by_disc[member(kind, p, n, a_or_q1, budget).D().value()].push_back(n);
    }
    std::vector<std::pair<int, int>> out;
    for (const auto& [D, ns] : by_disc) {
        for (size_t i = 0; i < ns.size(); ++i) {
            for (size_t j = i + 1; j < ns.size(); ++j)
                out.emplace_back(ns[i], ns[j]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Element> pth_power_witness(FundamentalDiscriminant D, const Element& target, Int p4, Int norm_root,
                                         const Budget& budget)
{
    if (p4 < 2 || norm_root < 1)
        raise(ErrorKind::PreconditionViolated, "pth_power_witness: need p4 >= 2 and norm_root >= 1");
    const bool half = mod(D.value(), 4) == 1;
    const Int d0 = half ? D.value() : D.value() / 4;
    const mpz_class ad = -d0;
    mpz_class target_norm = target.x * target.x + ad * target.y * target.y;
    if (half) {
        if (mpz_class(target.x - target.y) % 2 != 0 || mpz_class(target_norm % 4) != 0)
            raise(ErrorKind::PreconditionViolated, "half-integral target needs x = y mod 2");
        target_norm /= 4;
    }
    mpz_class expected;
    mpz_ui_pow_ui(expected.get_mpz_t(), static_cast<unsigned long>(norm_root), static_cast<unsigned long>(p4));
    if (Int(mpz_sizeinbase(expected.get_mpz_t(), 2)) > budget.generator_max_bits)
        raise(ErrorKind::BudgetExceeded, "pth_power_witness: norm too large");
    if (target_norm != expected)
        raise(ErrorKind::PreconditionViolated, "target norm is not norm_root^p4");

    const mpz_class M = half ? mpz_class(4 * mpz_class(norm_root)) : mpz_class(norm_root);
    mpz_class vmax = M / ad;
    mpz_sqrt(vmax.get_mpz_t(), vmax.get_mpz_t());
    vmax += 1;
    mpz_class scale = 1;
    if (half)
        mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(p4 - 1));
    for (mpz_class v = -vmax; v <= vmax; ++v) {
        mpz_class rem = M - ad * v * v;
        if (rem < 0 || mpz_perfect_square_p(rem.get_mpz_t()) == 0)
            continue;
        mpz_class u;
        mpz_sqrt(u.get_mpz_t(), rem.get_mpz_t());
        std::vector<mpz_class> us{-u};
        if (u != 0)
            us.push_back(u);
        for (const mpz_class& uu : us) {
            if (half && mpz_class(uu - v) % 2 != 0)
                continue;
            Element pw = power_in_order({uu, v}, d0, p4);
            if (half) {
                if (!mpz_divisible_p(pw.x.get_mpz_t(), scale.get_mpz_t()) ||
                    !mpz_divisible_p(pw.y.get_mpz_t(), scale.get_mpz_t()))
                    continue;
                pw.x /= scale;
                pw.y /= scale;
            }
            if (pw == target || (pw.x == -target.x && pw.y == -target.y))
                return Element{uu, v};
        }
    }
    return std::nullopt;
}

std::vector<std::pair<Int, Int>> diophantine_count(Int d1, Int d2, Int p, Int y_max)
{
    std::vector<std::pair<Int, Int>> out;
    mpz_class pw = 1;
    for (Int y = 1; y <= y_max; ++y) {
        pw *= p;
        mpz_class t = pw - d2;
        if (t <= 0 || !mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(d1)))
            continue;
        t /= d1;
        if (mpz_perfect_square_p(t.get_mpz_t()) == 0)
            continue;
        mpz_class x;
        mpz_sqrt(x.get_mpz_t(), t.get_mpz_t());
        if (x > 0)
            out.emplace_back(x.get_si(), y);
    }
    return out;
}

bool no_pm1_solution(PmOneShape shape, Int q, Int p, Int x_max)
{
    const mpz_class lead = mpz_class(shape == PmOneShape::FourQSq ? 4 : 16) * q * q;
    mpz_class pw = 3;
    for (Int x = 1; x <= x_max; ++x) {
        pw *= p;
        mpz_class diff = lead - pw;
        if (diff == 1 || diff == -1)
            return false;
    }
    return true;
}

const std::vector<TableRow>& reference_tables()
{
    static const std::vector<TableRow> rows = {
        {3, 2, -2, {}},
        {3, 4, -5, {2}},
        {3, 5, -2, {}},
        {3, 7, -2186, {42}},
        {3, 8, -410, {2, 8}},
        {3, 10, -122, {10}},
        {3, 11, -177146, {2, 198}},
        {3, 13, -1594322, {780}},
        {3, 14, -1195742, {2, 322}},
        {3, 16, -672605, {2, 2, 2, 112}},
        {3, 17, -129140162, {2, 5304}},
        {3, 19, -1162261466, {2, 16074}},
        {3, 20, -72041, {2, 140}},
        {5, 2, -21, {2, 2}},
        {5, 3, -1, {}},
        {5, 4, -69, {2, 4}},
        {5, 6, -15621, {2, 2, 18}},
        {5, 7, -78121, {168}},
        {5, 8, -390621, {2, 2, 2, 8, 8}},
        {5, 9, -1953121, {2, 360}},
        {5, 11, -48828121, {2, 2, 1188}},
        {5, 12, -244140621, {2, 2, 2, 1620}},
        {5, 13, -1220703121, {2, 10946}},
        {7, 2, -3, {}},
        {7, 3, -38, {6}},
        {7, 4, -6, {2}},
        {7, 5, -16806, {2, 50}},
        {7, 6, -817, {2, 6}},
        {7, 8, -3603, {16}},
        {7, 9, -4483734, {2, 2, 2, 234}},
        {7, 10, -17654703, {2, 2, 780}},
        {7, 11, -1977326742, {2, 2, 9438}},
        {7, 12, -3844802, {2, 2, 4, 96}},
    };
    return rows;
}

FamilyKind table_family(Int p)
{
    return p == 5 ? FamilyKind::FourMinusPn : FamilyKind::OneMinusPn;
}

std::vector<FamilyTableRow> family_table(FamilyKind kind, Int p, const std::vector<int>& ns,
                                         std::optional<Int> a_or_q1, const Budget& budget)
{
    std::vector<FamilyTableRow> rows;
    for (int n : ns) {
        FamilyMember m = member(kind, p, n, a_or_q1, budget);
        FamilyTableRow row{n, m.radicand, m.field, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
        try {
            ClassGroup cg = class_group(m.D(), budget);
            row.invariant_factors = cg.invariant_factors();
            row.h = cg.h();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BudgetExceeded)
                throw;
        }
        try {
            row.s = ideal_class_order(m.D(), p, budget);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BudgetExceeded)
                throw;
        }
        // x^2 - p^n or x^2 - 4p^n shape with the family's x
        std::optional<std::pair<Int, FamilyShape>> shape;
        int exponent = n;
        switch (kind) {
        case FamilyKind::OneMinusPn: shape = {{1, FamilyShape::X2MinusPn}}; break;
        case FamilyKind::FourMinusPn: shape = {{2, FamilyShape::X2MinusPn}}; break;
        case FamilyKind::Q1SqMinusPn: shape = {{*m.a_or_q1, FamilyShape::X2MinusPn}}; break;
        case FamilyKind::FourQ1SqMinusPn: shape = {{2 * *m.a_or_q1, FamilyShape::X2MinusPn}}; break;
        case FamilyKind::OneMinus4Pn: shape = {{1, FamilyShape::X2Minus4Pn}}; break;
        case FamilyKind::SandsASq:
            shape = {{*m.a_or_q1, FamilyShape::X2Minus4Pn}};
            exponent = 2 * n;
            break;
        }
        if (row.h && gcd(p, exponent) == 1) {
            try {
                row.verdict = std::string(to_string(family_criterion(p, shape->first, exponent, shape->second, budget, row.h).value));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::PreconditionViolated && e.kind() != ErrorKind::BudgetExceeded)
                    throw;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace iqlambda
