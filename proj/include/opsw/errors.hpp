#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opsw {

/// Malformed instance, solution or LP text. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally invalid input (too few nodes, empty model, ...).
class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (alpha > 1, theta < 0, shape mismatch).
class DomainError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// A first-stage path violates the named constraint of its model kind.
class FeasibilityError : public std::runtime_error {
public:
    FeasibilityError(std::string constraint, const std::string& what)
        : std::runtime_error(what), constraint_(std::move(constraint)) {}

    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

/// Model too large for exhaustive enumeration.
class CapacityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace opsw
