#pragma once

#include <stdexcept>
#include <string>

namespace eulerpose {

/// Input outside an operation's mathematical domain (non-finite angle, empty sample).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A value failed a structural check, e.g. a rotation block that is not orthonormal.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file content. `line()` is 1-based, 0 when no single line is to blame.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Rejected training/CLI configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace eulerpose
