#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iqlambda/budget.hpp"
#include "iqlambda/numth.hpp"
#include "iqlambda/quadforms.hpp"

namespace iqlambda {

enum class FamilyKind { OneMinus4Pn, SandsASq, OneMinusPn, FourMinusPn, Q1SqMinusPn, FourQ1SqMinusPn };

std::string_view to_string(FamilyKind kind) noexcept;
std::optional<FamilyKind> parse_family_kind(std::string_view name) noexcept;

struct FamilyMember {
    FamilyKind kind;
    Int p;
    int n;
    std::optional<Int> a_or_q1;
    Int radicand;
    RadicandField field;

    FundamentalDiscriminant D() const noexcept { return field.D; }
};

// {a : 0 < a < 2p^n, p does not divide a, a^(p-1) = 1 mod p^2}
std::vector<Int> a_set(Int p, int n, const Budget& budget = {});

FamilyMember member(FamilyKind kind, Int p, int n, std::optional<Int> a_or_q1 = std::nullopt,
                    const Budget& budget = {});

struct OrderCheck {
    Int s;
    std::optional<Int> expected;  // empty when no order statement covers the member
    std::string note;
    bool excluded() const noexcept { return !expected.has_value(); }
    bool matches() const noexcept { return expected && *expected == s; }
};

OrderCheck verify_order(const FamilyMember& m, const Budget& budget = {});

std::vector<std::pair<int, int>> collision_scan(FamilyKind kind, Int p, int n_lo, int n_hi,
                                                const std::vector<int>& skip = {},
                                                std::optional<Int> a_or_q1 = std::nullopt,
                                                const Budget& budget = {});

struct Element {
    mpz_class x;
    mpz_class y;
    bool operator==(const Element&) const = default;
};

// target is x + y sqrt(d0), or (x + y sqrt(d0))/2 when D = 1 mod 4; the witness uses the same convention.
std::optional<Element> pth_power_witness(FundamentalDiscriminant D, const Element& target, Int p4, Int norm_root,
                                         const Budget& budget = {});

std::vector<std::pair<Int, Int>> diophantine_count(Int d1, Int d2, Int p, Int y_max = 40);

enum class PmOneShape { FourQSq, SixteenQSq };
bool no_pm1_solution(PmOneShape shape, Int q, Int p, Int x_max = 40);

struct TableRow {
    Int p;
    int n;
    Int radicand_label;  // squarefree d0 of the printed field Q(sqrt(d0))
    std::vector<Int> invariant_factors;
};

// The published class-group tables: 1 - 3^n, 4 - 5^n and 1 - 7^n.
const std::vector<TableRow>& reference_tables();
FamilyKind table_family(Int p);

struct FamilyTableRow {
    int n;
    Int radicand;
    RadicandField field;
    std::optional<std::vector<Int>> invariant_factors;  // empty when over budget
    std::optional<Int> h;
    std::optional<std::string> verdict;
    std::optional<Int> s;
};

std::vector<FamilyTableRow> family_table(FamilyKind kind, Int p, const std::vector<int>& ns,
                                         std::optional<Int> a_or_q1 = std::nullopt, const Budget& budget = {});

} // namespace iqlambda
