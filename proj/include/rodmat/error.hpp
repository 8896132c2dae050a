#ifndef RODMAT_ERROR_HPP
#define RODMAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rodmat {

enum class ErrorKind {
    DivisionByZero,
    InvalidConjugation,
    DegenerateNode,
    NotANode,
    NotGibbonsHawkingForm,
    NotAsymptoticallyStandard,
    MalformedAsymptotics,
    CannotNormalize,
    InvalidParameters,
    NotImplementedInPaper,
    OutOfDomain,
    Unsupported,
    NoSolution,
    ContourCollision,
    WrongSplittingRoute,
    SingularField,
    SchemaError,
    InvalidArgument
};

inline const char* kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::InvalidConjugation: return "InvalidConjugation";
    case ErrorKind::DegenerateNode: return "DegenerateNode";
    case ErrorKind::NotANode: return "NotANode";
    case ErrorKind::NotGibbonsHawkingForm: return "NotGibbonsHawkingForm";
    case ErrorKind::NotAsymptoticallyStandard: return "NotAsymptoticallyStandard";
    case ErrorKind::MalformedAsymptotics: return "MalformedAsymptotics";
    case ErrorKind::CannotNormalize: return "CannotNormalize";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::NotImplementedInPaper: return "NotImplementedInPaper";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::ContourCollision: return "ContourCollision";
    case ErrorKind::WrongSplittingRoute: return "WrongSplittingRoute";
    case ErrorKind::SingularField: return "SingularField";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace rodmat

#endif
