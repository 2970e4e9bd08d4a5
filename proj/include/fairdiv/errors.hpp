#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

/// Input text could not be parsed. line/column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line = 0, int column = 0)
        : std::runtime_error(format(message, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, int line, int column) {
        if (line <= 0) return message;
        return message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
    }

    int line_;
    int column_;
};

/// A value or argument lies outside an operation's domain.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An allocation (or partial allocation) fails structural validation.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exhaustive operation would exceed its configured budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed result violates a postcondition the algorithm guarantees.
class InternalInvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace fairdiv
