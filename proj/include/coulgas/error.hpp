#pragma once

#include <stdexcept>
#include <string>

namespace coulgas {

// Evaluation at a point where the kernel (or an energy) is singular.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested (kernel, potential, ...) combination is outside what the
// library supports in closed form.
struct CapabilityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to reach the requested tolerance.  Carries the
// tolerance that was actually achieved.
struct NumericError : std::runtime_error {
    double achieved;
    NumericError(const std::string& what, double achieved_tol)
        : std::runtime_error(what), achieved(achieved_tol) {}
};

// Periodic configuration whose charge does not match the background.
struct NeutralityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Configuration file violates the schema; message carries the key path.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Not enough decorrelated data to form an estimate.
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace coulgas
