#pragma once

#include <stdexcept>
#include <string>

namespace stirred {

/// Bad user input: unknown keys, missing required keys, out-of-range values.
/// The command-line tool maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal invariant failed (coupling order broken, explicit scheme
/// left [0,1], ...). Indicates a bug or an unstable parameter choice.
/// The command-line tool maps this to exit code 3.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two coupled trajectories left the partial order.
class CouplingViolation : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

/// An explicit scheme produced values outside [-tol, 1 + tol].
class InstabilityError : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

/// Exact generator requested for more states than the dense limit.
class StateSpaceTooLarge : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A reaction term has no nontrivial root at the requested parameter.
class NoRootsError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Bisection endpoints do not carry the required verdicts.
class BracketInvalid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A ray from the origin misses the target polyline.
class NoIntersection : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stirred
