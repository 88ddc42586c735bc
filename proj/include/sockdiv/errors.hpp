#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sockdiv {

enum class ErrorKind {
    ParseError,
    NotABijection,
    ArityMismatch,
    SizeMismatch,
    FiberSizeError,
    FibersOverlap,
    DomainMismatch,
    IncompleteMatching,
    OracleViolation,
    SizeBoundExceeded,
    BudgetExceeded,
    ContractViolation,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotABijection: return "NotABijection";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::FiberSizeError: return "FiberSizeError";
    case ErrorKind::FibersOverlap: return "FibersOverlap";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::IncompleteMatching: return "IncompleteMatching";
    case ErrorKind::OracleViolation: return "OracleViolation";
    case ErrorKind::SizeBoundExceeded: return "SizeBoundExceeded";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ContractViolation: return "ContractViolation";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

    /// Input-data errors (exit code 2 in the CLI), as opposed to internal
    /// or contract failures (exit code 1).
    bool is_validation() const noexcept
    {
        switch (kind_) {
        case ErrorKind::ParseError:
        case ErrorKind::NotABijection:
        case ErrorKind::ArityMismatch:
        case ErrorKind::SizeMismatch:
        case ErrorKind::FiberSizeError:
        case ErrorKind::FibersOverlap:
        case ErrorKind::DomainMismatch:
            return true;
        default:
            return false;
        }
    }

private:
    ErrorKind kind_;
};

class ParseError final : public Error {
public:
    explicit ParseError(const std::string& m) : Error(ErrorKind::ParseError, m) {}
};

class NotABijection final : public Error {
public:
    explicit NotABijection(const std::string& m) : Error(ErrorKind::NotABijection, m) {}
};

class ArityMismatch final : public Error {
public:
    explicit ArityMismatch(const std::string& m) : Error(ErrorKind::ArityMismatch, m) {}
};

class SizeMismatch final : public Error {
public:
    explicit SizeMismatch(const std::string& m) : Error(ErrorKind::SizeMismatch, m) {}
};

class FiberSizeError final : public Error {
public:
    explicit FiberSizeError(const std::string& m) : Error(ErrorKind::FiberSizeError, m) {}
};

class FibersOverlap final : public Error {
public:
    explicit FibersOverlap(const std::string& m) : Error(ErrorKind::FibersOverlap, m) {}
};

class DomainMismatch final : public Error {
public:
    explicit DomainMismatch(const std::string& m) : Error(ErrorKind::DomainMismatch, m) {}
};

class IncompleteMatching final : public Error {
public:
    explicit IncompleteMatching(const std::string& m) : Error(ErrorKind::IncompleteMatching, m) {}
};

class OracleViolation final : public Error {
public:
    explicit OracleViolation(const std::string& m) : Error(ErrorKind::OracleViolation, m) {}
};

class SizeBoundExceeded final : public Error {
public:
    explicit SizeBoundExceeded(const std::string& m) : Error(ErrorKind::SizeBoundExceeded, m) {}
};

class BudgetExceeded final : public Error {
public:
    explicit BudgetExceeded(const std::string& m) : Error(ErrorKind::BudgetExceeded, m) {}
};

class ContractViolation final : public Error {
public:
    explicit ContractViolation(const std::string& m) : Error(ErrorKind::ContractViolation, m) {}
};

} // namespace sockdiv
