#pragma once

#include <stdexcept>
#include <string>

namespace cara {

/// Malformed or inconsistent input (dimension mismatch, empty batch, range gaps).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition between two objects does not hold
/// (e.g. a model that was not trained on the batch it is paired with).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// CSV / config parse failure. `row()` is 1-based and counts the header, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row = 0)
        : std::runtime_error(row ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A metric that has no defined value for the given inputs (SCPE against a zero-cost oracle).
class UndefinedMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace cara
