#pragma once

#include <optional>
#include <set>
#include <vector>

#include "iqlambda/budget.hpp"
#include "iqlambda/numth.hpp"
#include "iqlambda/quadforms.hpp"

namespace iqlambda {

// Residue condition N = -A mod B on series indices, D = A mod B on discriminants.
struct ModClass {
    Int A;
    Int B;
    bool operator==(const ModClass&) const = default;
};

// B_{n,chi} for the Kronecker character of a fundamental discriminant of either sign
// (disc = 1 gives the trivial character).
Rational generalized_bernoulli(int n, Int disc, const Budget& budget = {});
Rational generalized_bernoulli(int n, FundamentalDiscriminant D, const Budget& budget = {});

// L(1 - n, chi) = -B_{n,chi} / n.
Rational l_value_neg(int n, Int disc, const Budget& budget = {});
Rational l_value_neg(int n, FundamentalDiscriminant D, const Budget& budget = {});

Rational cohen_h(int r, Int N, const Budget& budget = {});

Int alpha(Int p) noexcept;

struct QSeries {
    Int bound = 0;
    std::vector<Rational> coefficients;  // index N in [0, bound]
    std::optional<Int> level_tag;

    static QSeries zero(Int bound, std::optional<Int> level = std::nullopt);
    const Rational& operator[](Int N) const { return coefficients[size_t(N)]; }
    Rational& operator[](Int N) { return coefficients[size_t(N)]; }
    bool operator==(const QSeries& other) const;
};

// alpha(p) H(p, N) / p for 0 <= N <= bound.
QSeries build_scaled_series(Int p, Int bound, const Budget& budget = {});

struct Character {
    enum class Kind { Legendre, Psi4, Chi8 };
    Kind kind;
    Int prime = 0;  // Legendre only

    static Character legendre(Int q) { return {Kind::Legendre, q}; }
    static Character psi4() { return {Kind::Psi4, 0}; }
    static Character chi8() { return {Kind::Chi8, 0}; }

    int operator()(Int N) const noexcept;
    Int conductor() const noexcept;
};

QSeries series_twist(const QSeries& g, Character chi);
QSeries series_u(const QSeries& g, Int l);
QSeries series_v(const QSeries& g, Int l);
QSeries series_combine(const Rational& a, const QSeries& g, const Rational& b, const QSeries& h);

struct CongruenceResult {
    bool pass = true;
    Int index = -1;  // first mismatch
    mpz_class residue_g;
    mpz_class residue_h;
};

CongruenceResult congruence_check(const QSeries& g, const QSeries& h, Int modulus, Int upto);

struct SturmData {
    mpz_class index;
    Rational bound;
};

SturmData sturm_data(Int k_times_2, const mpz_class& N1);

struct KappaConstants {
    mpz_class kappa;
    mpz_class P1;
    mpz_class P2;
    mpz_class P3;
};

KappaConstants kappa_constants(Int p, const std::set<Int>& splus, const std::set<Int>& sminus, Int Q, ModClass ab);

// Twist/U/V operator chain isolating N in the class -A mod B with (-N/r) = +1 on splus,
// -1 on sminus and Q.
QSeries eisenstein_pipeline(const QSeries& g, const std::set<Int>& splus, const std::set<Int>& sminus, Int Q,
                            ModClass ab);

// Same support selected coefficient by coefficient.
QSeries direct_filter(const QSeries& g, const std::set<Int>& splus, const std::set<Int>& sminus, Int Q,
                      ModClass ab);

} // namespace iqlambda
