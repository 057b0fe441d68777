#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asymlim {

enum class ErrorKind {
    DimensionMismatch,
    NotHermitian,
    NotPsd,
    SingularBelowFloor,
    NotContraction,
    NonFinite,
    InvalidIndex,
    InjectivityViolation,
    WindowTooLarge,
    NoConvergence,
    Inconclusive,
    SpecViolation,
    NearSingularResolvent,
    NotAdmissibleTransform,
    Undecidable,
    SyntaxError,
    DivisionByZero,
    DomainError,
    MalformedInput,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::SingularBelowFloor: return "SingularBelowFloor";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::InjectivityViolation: return "InjectivityViolation";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::SpecViolation: return "SpecViolation";
    case ErrorKind::NearSingularResolvent: return "NearSingularResolvent";
    case ErrorKind::NotAdmissibleTransform: return "NotAdmissibleTransform";
    case ErrorKind::Undecidable: return "Undecidable";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

/// Base exception for every failure raised by the library. `kind()` is the
/// machine-readable category; `what()` carries the human diagnostic.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class SingularBelowFloorError : public Error {
public:
    SingularBelowFloorError(double eigenvalue, double floor)
        : Error(ErrorKind::SingularBelowFloor,
                "eigenvalue " + std::to_string(eigenvalue) + " is below floor " +
                    std::to_string(floor)),
          eigenvalue_(eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

}  // namespace asymlim
