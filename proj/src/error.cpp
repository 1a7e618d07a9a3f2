#include "iqlambda/error.hpp"

namespace iqlambda {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotSplit: return "NotSplit";
    case ErrorKind::PerfectSquare: return "PerfectSquare";
    case ErrorKind::DiscriminantMismatch: return "DiscriminantMismatch";
    case ErrorKind::NoRepresentation: return "NoRepresentation";
    case ErrorKind::DomainTooSmall: return "DomainTooSmall";
    case ErrorKind::Inapplicable: return "Inapplicable";
    case ErrorKind::IntegralityViolation: return "IntegralityViolation";
    case ErrorKind::CriterionDisagreement: return "CriterionDisagreement";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ExcludedField: return "ExcludedField";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::NotFoundWithinBudget: return "NotFoundWithinBudget";
    case ErrorKind::NonIntegralCoefficient: return "NonIntegralCoefficient";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind)
{
}

void raise(ErrorKind kind, const std::string& detail)
{
    throw Error(kind, detail);
}

} // namespace iqlambda
