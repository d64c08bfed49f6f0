#pragma once

#include <stdexcept>
#include <string>

namespace agripv {

// Configuration problems (bad scenario keys, out-of-range values) map to CLI
// exit code 2; problems with input data (weather, curve files) map to 3.
enum class ErrorCategory { Config, Data, Compute };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(ErrorCategory::Data, what) {}
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& what, long record = -1)
        : Error(ErrorCategory::Data, what), record_(record) {}

    /// Zero-based index of the first offending record, or -1.
    long record() const noexcept { return record_; }

private:
    long record_;
};

class UnitError : public Error {
public:
    explicit UnitError(const std::string& what) : Error(ErrorCategory::Data, what) {}
};

// Numerical preconditions violated at evaluation time (sun below horizon,
// divergent discount series, empty aggregation period, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCategory::Compute, what) {}
};

}  // namespace agripv
