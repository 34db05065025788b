#pragma once

#include <stdexcept>
#include <string>

namespace fibercap {

/// Invalid user-supplied parameter. `field()` names the offending input.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A numerical procedure failed to converge or certify its result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula (e.g. S < S1 for I1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Covariance structure is singular or indefinite beyond the jitter cap.
class DegenerateLawError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DimensionError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace fibercap
