#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "iqlambda/budget.hpp"
#include "iqlambda/numth.hpp"

namespace iqlambda {

// Negative fundamental discriminant.
class FundamentalDiscriminant {
public:
    static FundamentalDiscriminant from(Int D);
    static bool is_fundamental(Int D);  // any sign; 1 counts as fundamental

    Int value() const noexcept { return value_; }
    Int magnitude() const noexcept { return -value_; }
    auto operator<=>(const FundamentalDiscriminant&) const = default;

private:
    explicit FundamentalDiscriminant(Int D) : value_(D) {}
    Int value_;
};

struct RadicandField {
    FundamentalDiscriminant D;
    Int d0;  // squarefree part of the radicand, label "Q(sqrt(d0))"
    Int m;   // t = d0 * m^2
    std::string label() const;
};

RadicandField fundamental_from_radicand(Int t, const Budget& budget = {});

struct QuadraticForm {
    Int a = 1;
    Int b = 0;
    Int c = 1;

    Int discriminant() const noexcept { return b * b - 4 * a * c; }
    bool is_reduced() const noexcept;
    QuadraticForm inverse() const noexcept;
    auto operator<=>(const QuadraticForm&) const = default;
};

QuadraticForm reduce(const QuadraticForm& f) noexcept;
QuadraticForm principal_form(FundamentalDiscriminant D) noexcept;
QuadraticForm compose(const QuadraticForm& f, const QuadraticForm& g);
QuadraticForm power(const QuadraticForm& f, std::uint64_t e);

// Unreduced form (p, b, c) with b^2 - 4pc = D, 0 < b < 2p.
QuadraticForm prime_form(FundamentalDiscriminant D, Int p);

// All reduced forms of discriminant D, ordered by (a, b).
std::vector<QuadraticForm> reduced_forms(FundamentalDiscriminant D, const Budget& budget = {});

class ClassGroup {
public:
    ClassGroup(FundamentalDiscriminant D, std::vector<QuadraticForm> forms);

    FundamentalDiscriminant discriminant() const noexcept { return D_; }
    const std::vector<QuadraticForm>& forms() const noexcept { return forms_; }
    const std::vector<Int>& invariant_factors() const noexcept { return factors_; }
    Int h() const noexcept { return Int(forms_.size()); }
    std::optional<size_t> index_of(const QuadraticForm& f) const;
    Int element_order(const QuadraticForm& f) const;

private:
    FundamentalDiscriminant D_;
    std::vector<QuadraticForm> forms_;
    std::vector<Int> factors_;
};

ClassGroup class_group(FundamentalDiscriminant D, const Budget& budget = {});

enum class SplittingType { Split, Inert, Ramified };
SplittingType splitting_type(FundamentalDiscriminant D, Int q) noexcept;

Int ideal_class_order(FundamentalDiscriminant D, Int p, const Budget& budget = {});

// xi = (x + y sqrt(D)) / 2 with x^2 + |D| y^2 = 4 p^s.
struct Generator {
    mpz_class x;
    mpz_class y;
};

Generator principal_generator(FundamentalDiscriminant D, Int p, Int s, const Budget& budget = {});

Rational analytic_h_bound(FundamentalDiscriminant D);

std::string format_invariant_factors(const std::vector<Int>& factors);

} // namespace iqlambda
