#pragma once

#include <stdexcept>
#include <string>

namespace epns {

// Bad grid sizes, inconsistent config files, out-of-range parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An operation precondition (mean-zero source, positive density, ...) failed.
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Step-size guards (CFL, velocity-box displacement). Caller may retry with smaller dt.
struct StepSizeError : std::runtime_error {
    explicit StepSizeError(const std::string& what) : std::runtime_error(what) {}
};

// Unrecoverable state reached mid-run (positivity breach in the pressureless solver).
struct SolverAbort : std::runtime_error {
    SolverAbort(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time;
};

} // namespace epns
