#pragma once

#include <stdexcept>
#include <string>

namespace winepbe {

/// Invalid or inconsistent configuration value; the message names the key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a model function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A parameterised rate became negative where the model requires it nonnegative.
class ModelValidityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values or other floating point breakdown during evaluation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace winepbe
