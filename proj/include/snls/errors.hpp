#pragma once

#include <stdexcept>
#include <string>

namespace snls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected argument or malformed object (bad exponent, non-admissible pair, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared in a field.
class CorruptField : public Error {
public:
    CorruptField() : Error("corrupt field") {}
};

/// Non-finite values appeared during time stepping.
class BlowUpError : public Error {
public:
    explicit BlowUpError(double time)
        : Error("blow-up detected at t=" + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Picard iteration failed to contract.
class NotContracting : public Error {
public:
    NotContracting() : Error("not contracting; shrink T0") {}
};

}  // namespace snls
