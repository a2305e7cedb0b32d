#pragma once

#include <stdexcept>
#include <string>

namespace flexsat {

/// Input outside the physical domain of a parameter (non-positive length, |nu| >= 1, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Effective inertia determinant too close to zero to invert.
class SingularConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// State / basis layout mismatch.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Point outside a plate rectangle.
class DomainError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class NumericalBlowupError : public std::runtime_error {
public:
    NumericalBlowupError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Adaptive step fell below the configured floor.
class StiffnessError : public std::runtime_error {
public:
    StiffnessError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace flexsat
