#pragma once

#include <stdexcept>
#include <string>

namespace fraburgers {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument or state outside a documented contract (bad sizes, grid mismatch,
// parameters out of range).
struct ContractViolation : Error {
    using Error::Error;
};

// A negative-order multiplier or an X-norm was requested for a field whose
// zero mode is not numerically zero.
struct MeanNotZero : Error {
    explicit MeanNotZero(double mean_coefficient)
        : Error("zero mode is not numerically zero (|c0| = " +
                std::to_string(mean_coefficient) + ")"),
          mean_abs(mean_coefficient) {}
    double mean_abs;
};

// dt violates the advective CFL restriction; carries the largest admissible dt.
struct CflViolation : Error {
    CflViolation(double dt, double admissible)
        : Error("time step " + std::to_string(dt) +
                " exceeds CFL-admissible " + std::to_string(admissible)),
          admissible_dt(admissible) {}
    double admissible_dt;
};

// A non-finite value appeared in the solution; carries the last healthy time.
struct BlowUp : Error {
    explicit BlowUp(double t)
        : Error("solution lost finiteness after t = " + std::to_string(t)),
          last_healthy_time(t) {}
    double last_healthy_time;
};

// Time-integral steady route hit the horizon before the tail criterion.
struct TailNotConverged : Error {
    TailNotConverged(double horizon, double last_increment)
        : Error("tail increment " + std::to_string(last_increment) +
                " still above tolerance at horizon t = " +
                std::to_string(horizon)),
          last_increment_norm(last_increment) {}
    double last_increment_norm;
};

// Inner or outer fixed-point iteration stopped contracting.
struct SolverDivergence : Error {
    using Error::Error;
};

// Smallness gate failed (or its domain condition is violated) where a solve
// requires it.
struct GateNotSatisfied : Error {
    explicit GateNotSatisfied(const std::string& what, double value = 0.0)
        : Error(what), gate_value(value) {}
    double gate_value;
};

// Config file problems: syntax, unknown keys, missing keys, bad values.
struct ConfigError : Error {
    using Error::Error;
};

// Report window holds too few samples for the requested statistic.
struct WindowTooShort : Error {
    using Error::Error;
};

}  // namespace fraburgers
