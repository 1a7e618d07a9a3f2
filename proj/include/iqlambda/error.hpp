#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iqlambda {

enum class ErrorKind {
    BudgetExceeded,
    NotSplit,
    PerfectSquare,
    DiscriminantMismatch,
    NoRepresentation,
    DomainTooSmall,
    Inapplicable,
    IntegralityViolation,
    CriterionDisagreement,
    PreconditionViolated,
    ExcludedField,
    NotFound,
    NotFoundWithinBudget,
    NonIntegralCoefficient,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& detail);

} // namespace iqlambda
