#pragma once

#include <stdexcept>
#include <string>

namespace tailmoment {

/// Argument outside the domain of an operation (p + beta <= 0, negative t, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Adaptive quadrature ran out of panels. Carries the partial result.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial_log_value, double partial_rel_error)
        : std::runtime_error(what),
          partial_log_value_(partial_log_value),
          partial_rel_error_(partial_rel_error) {}

    double partial_log_value() const noexcept { return partial_log_value_; }
    double partial_rel_error() const noexcept { return partial_rel_error_; }

private:
    double partial_log_value_;
    double partial_rel_error_;
};

/// Bisection could not find a bracket below the requested probability.
class BracketError : public std::runtime_error {
public:
    explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed configuration or unknown names on the command-line surface.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tailmoment
