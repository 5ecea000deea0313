#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace stellar {

/// Short "%.3g" rendering of a measured value or tolerance for error messages.
inline std::string format_measure(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// Invalid argument for a mathematical operation (out-of-range index, zero state, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A vector or operator that should be permutation symmetric is not.
class SymmetryError : public std::runtime_error {
public:
    SymmetryError(const std::string& what, double deficit)
        : std::runtime_error(what), deficit_(deficit) {}
    double deficit() const noexcept { return deficit_; }

private:
    double deficit_;
};

/// An iterative method stopped before reaching its tolerance.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, double best_value = 0.0)
        : std::runtime_error(what), best_value_(best_value) {}
    double best_value() const noexcept { return best_value_; }
    bool converged() const noexcept { return false; }

private:
    double best_value_;
};

/// Requested problem size exceeds a hard limit.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column, std::string token)
        : std::runtime_error(format(message, line, column, token)),
          line_(line), column_(column), token_(std::move(token)) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& token() const noexcept { return token_; }

private:
    static std::string format(const std::string& message, int line, int column,
                              const std::string& token) {
        return "parse error at line " + std::to_string(line) + ", column " +
               std::to_string(column) + " near '" + token + "': " + message;
    }

    int line_;
    int column_;
    std::string token_;
};

}  // namespace stellar
