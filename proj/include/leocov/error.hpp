#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace leocov {

// Configuration violates a physical invariant (negative radius, alpha <= 2, ...).
class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function (e.g. a height off the cap).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An iterative kernel ran out of iterations, or a result drifted out of range
// by more than rounding can explain.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModeMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// First and second moments do not admit a beta distribution.
class UnfittableMoments : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Installs the sink for non-fatal diagnostics. The default writes to stderr.
/// Passing an empty handler restores the default.
void set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace leocov
