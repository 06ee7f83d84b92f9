#ifndef PFORGE_ERRORS_HPP
#define PFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pforge {

enum class ErrorKind {
    NotAnEdge,
    NotABridge,
    UnknownVertex,
    SizeLimitExceeded,
    InvalidStructure,
    HypothesisViolated,
    BudgetExceeded,
    WitnessBroken,
    NotInBase,
    CoreNotInduced,
    CollisionError,
    DegreeBound,
    CompatibilityError,
    ConstructionInvariantBroken,
    FormatUnsupported,
    Uncertified,
    BadInput,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    /// CLI exit-code contract: 2 for broken invariants, 3 for exhausted budgets.
    int exit_code() const {
        switch (kind_) {
        case ErrorKind::BudgetExceeded:
        case ErrorKind::SizeLimitExceeded:
            return 3;
        default:
            return 2;
        }
    }

    static const char* kind_name(ErrorKind k);

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline const char* Error::kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::NotAnEdge: return "NotAnEdge";
    case ErrorKind::NotABridge: return "NotABridge";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorKind::InvalidStructure: return "InvalidStructure";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::WitnessBroken: return "WitnessBroken";
    case ErrorKind::NotInBase: return "NotInBase";
    case ErrorKind::CoreNotInduced: return "CoreNotInduced";
    case ErrorKind::CollisionError: return "CollisionError";
    case ErrorKind::DegreeBound: return "DegreeBound";
    case ErrorKind::CompatibilityError: return "CompatibilityError";
    case ErrorKind::ConstructionInvariantBroken: return "ConstructionInvariantBroken";
    case ErrorKind::FormatUnsupported: return "FormatUnsupported";
    case ErrorKind::Uncertified: return "Uncertified";
    case ErrorKind::BadInput: return "BadInput";
    }
    return "Error";
}

} // namespace pforge

#endif
