#pragma once

#include <map>
#include <optional>
#include <string>

#include "iqlambda/budget.hpp"
#include "iqlambda/numth.hpp"
#include "iqlambda/quadforms.hpp"

namespace iqlambda {

struct SplitPrimeContext {
    Int p;
    FundamentalDiscriminant D;
    Int r;  // root of D mod p^2, oriented so that e_minus(xi) is a unit
    Int s;  // order of the class of the prime above p
    std::optional<Generator> xi;

    Int e_minus() const;  // (x - y r) / 2 mod p^2
    Int e_plus() const;   // (x + y r) / 2 mod p^2
};

enum class Lambda { One, GreaterThanOne };
enum class Method { Sands, LValue, Both };

std::string_view to_string(Lambda value) noexcept;
std::string_view to_string(Method method) noexcept;

struct LambdaVerdict {
    Lambda value;
    Method method;
    std::map<std::string, std::string> witnesses;
};

SplitPrimeContext split_context(FundamentalDiscriminant D, Int p, const Budget& budget = {});

LambdaVerdict sands_test(const SplitPrimeContext& ctx, Int h);
LambdaVerdict lvalue_test(FundamentalDiscriminant D, Int p, const Budget& budget = {});

// known_h skips the class-group enumeration for the Sands branch.
LambdaVerdict classify_lambda(FundamentalDiscriminant D, Int p, const Budget& budget = {},
                              std::optional<Int> known_h = std::nullopt);

enum class CongruenceKind { OneMinusP, FourMinusP };

// True on the lambda > 1 side.
bool closed_congruence(CongruenceKind kind, Int p);

FundamentalDiscriminant find_D0(Int p);
bool wieferich(Int p);
Int find_q1(Int p);

enum class FamilyShape { X2MinusPn, X2Minus4Pn };

LambdaVerdict family_criterion(Int p, Int x1, int n, FamilyShape shape, const Budget& budget = {},
                               std::optional<Int> known_h = std::nullopt);

} // namespace iqlambda
