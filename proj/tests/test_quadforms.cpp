#include <doctest.h>

#include <cmath>
#include <map>

#include "iqlambda/error.hpp"
#include "iqlambda/quadforms.hpp"
#include "oracles.hpp"

using namespace iqlambda;

namespace {

FundamentalDiscriminant fd(Int D)
{
    return FundamentalDiscriminant::from(D);
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::NotFound;
}

} // namespace

TEST_CASE("fundamental discriminant predicate matches the definition")
{
    for (Int D = -5000; D < 0; ++D)
        CHECK_MESSAGE(FundamentalDiscriminant::is_fundamental(D) == oracle::fundamental(D), D);
    CHECK(kind_of([] { FundamentalDiscriminant::from(-12); }) == ErrorKind::PreconditionViolated);
    CHECK(kind_of([] { FundamentalDiscriminant::from(5); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("fundamental_from_radicand")
{
    const RadicandField a = fundamental_from_radicand(-2186);
    CHECK(a.D.value() == -8744);
    CHECK(a.d0 == -2186);
    CHECK(a.label() == "Q(√-2186)");
    const RadicandField b = fundamental_from_radicand(-23);
    CHECK(b.D.value() == -23);
    CHECK(b.m == 1);
    const RadicandField c = fundamental_from_radicand(-121);
    CHECK(c.D.value() == -4);
    CHECK(c.label() == "Q(√-1)");
    CHECK(fundamental_from_radicand(-242).D.value() == -8);
    CHECK(kind_of([] { fundamental_from_radicand(49); }) == ErrorKind::PerfectSquare);
    CHECK(kind_of([] { fundamental_from_radicand(5); }) == ErrorKind::PreconditionViolated);
    for (Int t = -2000; t < 0; ++t) {
        const RadicandField f = fundamental_from_radicand(t);
        CHECK(f.d0 * f.m * f.m == t);
        CHECK(f.D.value() == (mod(f.d0, 4) == 1 ? f.d0 : 4 * f.d0));
    }
}

TEST_CASE("class group examples")
{
    const ClassGroup g23 = class_group(fd(-23));
    CHECK(g23.h() == 3);
    CHECK(g23.invariant_factors() == std::vector<Int>{3});
    std::set<std::tuple<Int, Int, Int>> forms;
    for (const auto& f : g23.forms())
        forms.emplace(f.a, f.b, f.c);
    CHECK(forms == std::set<std::tuple<Int, Int, Int>>{{1, 1, 6}, {2, 1, 3}, {2, -1, 3}});

    const ClassGroup g4 = class_group(fd(-4));
    CHECK(g4.h() == 1);
    CHECK(g4.invariant_factors().empty());
    CHECK(class_group(fd(-8744)).invariant_factors() == std::vector<Int>{42});
    const ClassGroup g1640 = class_group(fd(-1640));
    CHECK(g1640.h() == 16);
    CHECK(g1640.invariant_factors() == std::vector<Int>{2, 8});
    CHECK(format_invariant_factors(g1640.invariant_factors()) == "Z/2Z x Z/8Z");
    CHECK(format_invariant_factors({}) == "trivial");
}

TEST_CASE("reduced forms agree with brute force and close under composition")
{
    for (Int D = -5000; D < -2; ++D) {
        if (!oracle::fundamental(D))
            continue;
        const ClassGroup g = class_group(fd(D));
        const auto ref = oracle::reduced_forms(D);
        REQUIRE(size_t(g.h()) == ref.size());
        for (const auto& f : g.forms()) {
            CHECK(ref.count({f.a, f.b, f.c}) == 1);
            CHECK(f.is_reduced());
        }
        Int product = 1;
        for (size_t i = 0; i < g.invariant_factors().size(); ++i) {
            product *= g.invariant_factors()[i];
            if (i + 1 < g.invariant_factors().size())
                CHECK(g.invariant_factors()[i + 1] % g.invariant_factors()[i] == 0);
        }
        CHECK(product == g.h());
        // #{x : x^n = 1} = prod gcd(n, d_i) determines the invariant factors
        std::map<Int, Int> order_count;
        for (const auto& f : g.forms())
            ++order_count[g.element_order(f)];
        for (Int n = 1; n <= g.h(); ++n) {
            if (g.h() % n != 0)
                continue;
            Int killed = 0;
            for (auto [ord, cnt] : order_count) {
                if (n % ord == 0)
                    killed += cnt;
            }
            Int expected = 1;
            for (Int d : g.invariant_factors())
                expected *= gcd(n, d);
            CHECK_MESSAGE(killed == expected, "D=" << D << " n=" << n);
        }
        if (-D <= 800) {
            for (const auto& f : g.forms()) {
                for (const auto& h : g.forms())
                    CHECK(g.index_of(compose(f, h)).has_value());
            }
        }
    }
}

TEST_CASE("composition examples and group laws")
{
    const auto D = fd(-23);
    const QuadraticForm one = principal_form(D);
    const QuadraticForm f{2, 1, 3}, g{2, -1, 3};
    CHECK(compose(one, f) == f);
    CHECK(compose(f, g) == QuadraticForm{1, 1, 6});
    CHECK(compose(f, f) == QuadraticForm{2, -1, 3});
    CHECK(f.inverse() == g);
    CHECK(kind_of([] { compose({2, 1, 3}, {1, 1, 1}); }) == ErrorKind::DiscriminantMismatch);

    const ClassGroup big = class_group(fd(-3299));
    const auto& forms = big.forms();
    for (size_t i = 0; i < forms.size(); i += 3) {
        for (size_t j = 0; j < forms.size(); j += 5) {
            CHECK(compose(forms[i], forms[j]) == compose(forms[j], forms[i]));
            const auto& k = forms[(i + j) % forms.size()];
            CHECK(compose(compose(forms[i], forms[j]), k) == compose(forms[i], compose(forms[j], k)));
        }
        CHECK(compose(forms[i], forms[i].inverse()) == principal_form(big.discriminant()));
    }
}

TEST_CASE("splitting type")
{
    CHECK(splitting_type(fd(-23), 3) == SplittingType::Split);
    CHECK(splitting_type(fd(-23), 5) == SplittingType::Inert);
    CHECK(splitting_type(fd(-4), 2) == SplittingType::Ramified);
}

TEST_CASE("ideal class order")
{
    CHECK(ideal_class_order(fd(-23), 3) == 3);
    CHECK(ideal_class_order(fd(-8), 3) == 1);
    CHECK(ideal_class_order(fd(-8744), 3) == 7);
    CHECK(kind_of([] { ideal_class_order(fd(-23), 5); }) == ErrorKind::NotSplit);
    for (Int D = -3000; D < -4; ++D) {
        if (!oracle::fundamental(D))
            continue;
        const ClassGroup g = class_group(fd(D));
        for (Int p : {3, 5, 7, 11}) {
            if (oracle::kronecker(D, p) != 1)
                continue;
            const Int s = ideal_class_order(fd(D), p);
            CHECK(g.h() % s == 0);
            const QuadraticForm pf = prime_form(fd(D), p);
            CHECK(s == g.element_order(reduce(pf)));
            CHECK(s == g.element_order(reduce(pf.inverse())));
        }
    }
}

TEST_CASE("principal generator examples")
{
    const Generator a = principal_generator(fd(-8), 3, 1);
    CHECK(a.x == 2);
    CHECK(a.y == 1);
    const Generator b = principal_generator(fd(-35), 3, 2);
    CHECK(b.x == 1);
    CHECK(b.y == 1);
    const Generator c = principal_generator(fd(-4), 13, 1);
    CHECK(c.x == 6);
    CHECK(c.y == 2);
    CHECK(kind_of([] { principal_generator(fd(-23), 3, 1); }) == ErrorKind::NoRepresentation);
}

TEST_CASE("principal generator matches ascending y search")
{
    for (Int D = -1500; D < -2; ++D) {
        if (!oracle::fundamental(D))
            continue;
        for (Int p : {3, 5, 7}) {
            if (oracle::kronecker(D, p) != 1)
                continue;
            const Int s = ideal_class_order(fd(D), p);
            if (s > 12)
                continue;
            const Generator g = principal_generator(fd(D), p, s);
            mpz_class four_ps;
            mpz_pow_ui(four_ps.get_mpz_t(), mpz_class(p).get_mpz_t(), static_cast<unsigned long>(s));
            four_ps *= 4;
            CHECK(g.x * g.x + mpz_class(-D) * g.y * g.y == four_ps);
            CHECK(mpz_class((g.x - g.y * D) % 2) == 0);
            const auto ref = oracle::generator_by_search(D, p, int(s));
            CHECK_MESSAGE(g.y == ref.second, "D=" << D << " p=" << p);
            CHECK(g.x == ref.first);
        }
    }
}

TEST_CASE("analytic class number bound")
{
    const Rational b23 = analytic_h_bound(fd(-23));
    // sqrt(23)/pi * (log(23)/2 + log log 23 + 2.8) = 8.4121...
    CHECK(b23 > Rational(841, 100));
    CHECK(b23 < Rational(842, 100));
    CHECK(Rational(3) <= b23);
    const Rational b8 = analytic_h_bound(fd(-8));
    CHECK(b8 > Rational(4));
    CHECK(b8 < Rational(42, 10));
    CHECK(kind_of([] { analytic_h_bound(fd(-4)); }) == ErrorKind::DomainTooSmall);
    CHECK(kind_of([] { analytic_h_bound(fd(-3)); }) == ErrorKind::DomainTooSmall);
    const auto f1093 = fundamental_from_radicand(1 - 1093).D;
    CHECK(analytic_h_bound(f1093) < Rational(1093));
    // outward rounding: the rational bound never falls below a long double evaluation
    for (Int D : {-7, -15, -23, -104, -971, -4027, -99995}) {
        if (!oracle::fundamental(D))
            continue;
        const long double x = std::fabs(static_cast<long double>(D));
        const long double v = std::sqrt(x) / 3.14159265358979323846L * (0.5L * std::log(x) + std::log(std::log(x)) + 2.8L);
        CHECK(analytic_h_bound(fd(D)).get_d() >= double(v) * (1 - 1e-12));
    }
}

TEST_CASE("class group budget")
{
    Budget small;
    small.class_group_abs_disc = 1000;
    CHECK(kind_of([&] { class_group(fd(-1003), small); }) == ErrorKind::BudgetExceeded);
    CHECK(size_t(class_group(fd(-995), small).h()) == oracle::reduced_forms(-995).size());
}
