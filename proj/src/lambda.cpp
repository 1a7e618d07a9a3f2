#include "iqlambda/lambda.hpp"

#include "iqlambda/error.hpp"
#include "iqlambda/lvalues.hpp"

namespace iqlambda {

namespace {

Int residue_mod(const mpz_class& v, Int m)
{
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(m));
    return r.get_si();
}

Int embed(const Generator& xi, Int r, Int p, int sign)
{
    const Int p2 = p * p;
    const Int inv2 = (p2 + 1) / 2;
    const Int x = residue_mod(xi.x, p2), y = residue_mod(xi.y, p2);
    const Int yr = Int(mulmod(std::uint64_t(y), std::uint64_t(r), std::uint64_t(p2)));
    const Int v = sign > 0 ? mod(x + yr, p2) : mod(x - yr, p2);
    return Int(mulmod(std::uint64_t(v), std::uint64_t(inv2), std::uint64_t(p2)));
}

void require_split(FundamentalDiscriminant D, Int p)
{
    if (p < 3 || !is_prime(std::uint64_t(p)))
        raise(ErrorKind::PreconditionViolated, std::to_string(p) + " is not an odd prime");
    if (kronecker(D.value(), p) != 1)
        raise(ErrorKind::NotSplit, std::to_string(p) + " does not split in Q(sqrt(" + std::to_string(D.value()) + "))");
}

Int checked_power(Int p, int n, const Budget& budget)
{
    Int v = 1;
    for (int i = 0; i < n; ++i) {
        if (v > budget.power_max_abs / p)
            raise(ErrorKind::BudgetExceeded, "p^n exceeds the integer budget");
        v *= p;
    }
    return v;
}

} // namespace

std::string_view to_string(Lambda value) noexcept
{
    return value == Lambda::One ? "one" : "gt1";
}

std::string_view to_string(Method method) noexcept
{
    switch (method) {
    case Method::Sands: return "sands";
    case Method::LValue: return "lvalue";
    case Method::Both: return "both";
    }
    return "";
}

Int SplitPrimeContext::e_minus() const
{
    if (!xi)
        raise(ErrorKind::Inapplicable, "no generator: p divides s");
    return embed(*xi, r, p, -1);
}

Int SplitPrimeContext::e_plus() const
{
    if (!xi)
        raise(ErrorKind::Inapplicable, "no generator: p divides s");
    return embed(*xi, r, p, +1);
}

SplitPrimeContext split_context(FundamentalDiscriminant D, Int p, const Budget& budget)
{
    require_split(D, p);
    SplitPrimeContext ctx{p, D, hensel_sqrt_mod_p2(D.value(), p), ideal_class_order(D, p, budget), std::nullopt};
    if (ctx.s % p == 0)
        return ctx;
    ctx.xi = principal_generator(D, p, ctx.s, budget);
    if (ctx.e_minus() % p == 0)
        ctx.r = p * p - ctx.r;
    if (ctx.e_minus() % p == 0 || ctx.e_plus() % p != 0)
        throw std::logic_error("split_context: generator is not supported on a single prime above p");
    return ctx;
}

LambdaVerdict sands_test(const SplitPrimeContext& ctx, Int h)
{
    if (!ctx.xi)
        raise(ErrorKind::Inapplicable, "p = " + std::to_string(ctx.p) + " divides the order s = " + std::to_string(ctx.s));
    const Int p2 = ctx.p * ctx.p;
    const Int e = ctx.e_minus();
    const Int pw = Int(powmod(std::uint64_t(e), std::uint64_t(ctx.p - 1), std::uint64_t(p2)));
    const bool greater = pw == 1 || h % ctx.p == 0;
    LambdaVerdict v{greater ? Lambda::GreaterThanOne : Lambda::One, Method::Sands, {}};
    v.witnesses["h"] = std::to_string(h);
    v.witnesses["s"] = std::to_string(ctx.s);
    v.witnesses["e_minus"] = std::to_string(e);
    v.witnesses["e_minus_pow"] = std::to_string(pw);
    return v;
}

LambdaVerdict lvalue_test(FundamentalDiscriminant D, Int p, const Budget& budget)
{
    require_split(D, p);
    if (D.magnitude() > budget.lvalue_abs_disc)
        raise(ErrorKind::BudgetExceeded, "L-value for |D| = " + std::to_string(D.magnitude()));
    const Rational L = l_value_neg(int(p), D, budget);
    Rational scaled = L / mpz_class(p);
    scaled.canonicalize();
    const mpz_class pz = p;
    if (mpz_divisible_p(scaled.get_den().get_mpz_t(), pz.get_mpz_t()))
        raise(ErrorKind::IntegralityViolation, "L(1-p, chi)/p is not p-integral for D = " + std::to_string(D.value()));
    mpz_class inv, res;
    mpz_invert(inv.get_mpz_t(), scaled.get_den().get_mpz_t(), pz.get_mpz_t());
    res = scaled.get_num() * inv;
    mpz_mod(res.get_mpz_t(), res.get_mpz_t(), pz.get_mpz_t());
    LambdaVerdict v{res != 0 ? Lambda::One : Lambda::GreaterThanOne, Method::LValue, {}};
    v.witnesses["l_value"] = to_string(L);
    v.witnesses["l_over_p_mod_p"] = res.get_str();
    return v;
}

LambdaVerdict classify_lambda(FundamentalDiscriminant D, Int p, const Budget& budget, std::optional<Int> known_h)
{
    require_split(D, p);
    std::optional<LambdaVerdict> lv, sv;
    try {
        lv = lvalue_test(D, p, budget);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded)
            throw;
    }
    try {
        SplitPrimeContext ctx = split_context(D, p, budget);
        if (ctx.xi) {
            Int h = known_h ? *known_h : class_group(D, budget).h();
            sv = sands_test(ctx, h);
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded)
            throw;
    }
    if (lv && sv) {
        if (lv->value != sv->value)
            raise(ErrorKind::CriterionDisagreement, "Sands and L-value criteria disagree for D = " +
                                                        std::to_string(D.value()) + ", p = " + std::to_string(p));
        LambdaVerdict both{lv->value, Method::Both, lv->witnesses};
        both.witnesses.insert(sv->witnesses.begin(), sv->witnesses.end());
        return both;
    }
    if (lv)
        return *lv;
    if (sv)
        return *sv;
    raise(ErrorKind::BudgetExceeded, "neither criterion fits the budget for D = " + std::to_string(D.value()));
}

bool closed_congruence(CongruenceKind kind, Int p)
{
    if (p <= 3 || !is_prime(std::uint64_t(p)))
        raise(ErrorKind::PreconditionViolated, "closed_congruence needs a prime p > 3");
    const std::uint64_t p2 = std::uint64_t(p * p);
    auto pow2 = [&](Int e) { return Int(powmod(2, std::uint64_t(e), p2)); };
    const Int m = Int(p2);
    if (kind == CongruenceKind::OneMinusP)
        return pow2(2 * p - 1) == mod(2 - p, m);
    const bool first = mod(pow2(4 * p - 1) - 8 + p, m) == 0;
    const bool second = mod(pow2(4 * p - 2) + Int(mulmod(std::uint64_t(pow2(4 * p - 5)), std::uint64_t(p), p2)) - 4, m) == 0;
    return first && second;
}

FundamentalDiscriminant find_D0(Int p)
{
    const Int t = closed_congruence(CongruenceKind::OneMinusP, p) ? 4 - p : 1 - p;
    return fundamental_from_radicand(t).D;
}

bool wieferich(Int p)
{
    return powmod(2, std::uint64_t(p - 1), std::uint64_t(p) * std::uint64_t(p)) == 1;
}

Int find_q1(Int p)
{
    if (p < 5 || !is_prime(std::uint64_t(p)))
        raise(ErrorKind::PreconditionViolated, "find_q1 needs a prime p >= 5");
    const std::uint64_t p2 = std::uint64_t(p) * std::uint64_t(p);
    for (const auto& pp : factorize(p - 2).factors) {
        if (powmod(std::uint64_t(pp.prime), std::uint64_t(p - 1), p2) != 1)
            return pp.prime;
    }
    raise(ErrorKind::NotFound, "no prime factor q of p - 2 with q^(p-1) != 1 mod p^2");
}

LambdaVerdict family_criterion(Int p, Int x1, int n, FamilyShape shape, const Budget& budget,
                               std::optional<Int> known_h)
{
    if (p < 3 || !is_prime(std::uint64_t(p)) || n < 2 || x1 < 1 || gcd(p, n) != 1 || gcd(p, x1) != 1)
        raise(ErrorKind::PreconditionViolated, "family_criterion: need odd prime p, n > 1, gcd(p, n) = gcd(p, x1) = 1");
    const Int pn = checked_power(p, n, budget);
    Int t;
    if (shape == FamilyShape::X2MinusPn) {
        if (x1 > pn / x1)
            raise(ErrorKind::PreconditionViolated, "family_criterion: need x1^2 < p^n");
        t = x1 * x1 - pn;
    } else {
        if ((x1 & 1) == 0 || x1 > 4 * pn / x1)
            raise(ErrorKind::PreconditionViolated, "family_criterion: need x1 odd and x1^2 < 4p^n");
        t = x1 * x1 - 4 * pn;
    }
    if (t >= 0)
        raise(ErrorKind::PreconditionViolated, "family_criterion: radicand must be negative");
    const RadicandField field = fundamental_from_radicand(t, budget);
    const Int h = known_h ? *known_h : class_group(field.D, budget).h();
    const std::uint64_t p2 = std::uint64_t(p) * std::uint64_t(p);
    const Int base = shape == FamilyShape::X2MinusPn ? 2 * x1 : x1;
    const Int w = Int(powmod(std::uint64_t(base) % p2, std::uint64_t(p - 1), p2));
    const bool one = h % p != 0 && w != 1;
    LambdaVerdict v{one ? Lambda::One : Lambda::GreaterThanOne, Method::Sands, {}};
    v.witnesses["D"] = std::to_string(field.D.value());
    v.witnesses["h"] = std::to_string(h);
    v.witnesses["h_mod_p"] = std::to_string(h % p);
    v.witnesses[shape == FamilyShape::X2MinusPn ? "2x1_pow" : "x1_pow"] = std::to_string(w);
    return v;
}

} // namespace iqlambda
