#pragma once

#include <stdexcept>
#include <string>

namespace qmeter {

// Base class for every failure the library reports deliberately.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// |sin(omega*T)| fell below the singularity guard; the closed-form
// propagator has a caustic there and none of its constants are defined.
class SingularDurationError : public Error {
public:
    using Error::Error;
};

// A coupling or drive profile failed the midpoint-symmetry requirement
// of the closed-form engine.
class AsymmetricInputError : public Error {
public:
    using Error::Error;
};

// Adaptive integration hit its refinement limit before reaching the
// requested tolerance. Carries the estimate it did achieve.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& msg, double achieved)
        : Error(msg), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

// Grid too coarse to resolve the kernel oscillation or a packet.
class GridResolutionError : public Error {
public:
    using Error::Error;
};

// Probability reached the edge of a periodic grid.
class AliasingError : public Error {
public:
    using Error::Error;
};

// Final-state norm drifted outside the allowed band.
class NormDeviationError : public Error {
public:
    using Error::Error;
};

// Time step violates the per-substep phase bound. Carries a usable step.
class PhaseBoundError : public Error {
public:
    PhaseBoundError(const std::string& msg, double suggested)
        : Error(msg), suggested_dt(suggested) {}
    double suggested_dt;
};

// Scenario file violates the schema; message names the offending field.
class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}
