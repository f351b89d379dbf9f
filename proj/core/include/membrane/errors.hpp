#pragma once

#include <stdexcept>
#include <string>

namespace membrane {

// Error taxonomy used across the library. The CLI maps these onto process
// exit codes (config/precondition -> 2, numeric -> 3, resource -> 4).

class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved_bound(achieved) {}
    double achieved_bound;
};

// Quadrature / solver failed to reach the requested tolerance; carries the
// bound that was actually achieved.
class AccuracyError : public NumericError {
public:
    AccuracyError(const std::string& what, double achieved) : NumericError(what, achieved) {}
};

class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace membrane
