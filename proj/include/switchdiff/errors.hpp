#pragma once

#include <stdexcept>
#include <string>

namespace switchdiff {

/// Bad model/config parameter (out of range, unknown field, malformed input).
class ParameterError : public std::runtime_error {
public:
    explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The recurrence criterion (or a requested epsilon) cannot be satisfied.
class InfeasibilityError : public std::runtime_error {
public:
    explicit InfeasibilityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A Monte Carlo estimate could not be formed (all paths censored,
/// too few samples, excessive censoring).
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The integrator produced a non-finite state. Carries the last time at
/// which the state was still finite.
class BlowupError : public std::runtime_error {
public:
    BlowupError(const std::string& msg, double last_valid_time)
        : std::runtime_error(msg), last_valid_time(last_valid_time) {}
    double last_valid_time;
};

}  // namespace switchdiff
