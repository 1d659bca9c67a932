#pragma once

#include <cmath>
#include <string>

#include "qmeter/errors.hpp"

namespace qmeter {

// Masses, oscillator frequency and measurement duration in natural units
// (hbar = 1). omega == 0 selects the free-particle variants of the
// closed-form constants; pointer_mass_infinite turns the pointer kinetic
// term off entirely.
struct PhysicalParams {
    double m = 1.0;      // oscillator mass
    double M = 1.0;      // pointer mass
    double omega = 1.0;  // oscillator angular frequency, >= 0
    double T = 1.0;      // duration of the interaction window
    bool pointer_mass_infinite = false;

    double inv_M() const { return pointer_mass_infinite ? 0.0 : 1.0 / M; }

    void validate() const {
        if (!(m > 0.0) || !std::isfinite(m))
            throw SchemaError("params.m must be positive and finite");
        if (!pointer_mass_infinite && (!(M > 0.0) || !std::isfinite(M)))
            throw SchemaError("params.M must be positive and finite (or infinite by flag)");
        if (!(omega >= 0.0) || !std::isfinite(omega))
            throw SchemaError("params.omega must be >= 0 and finite");
        if (!(T > 0.0) || !std::isfinite(T))
            throw SchemaError("params.T must be positive and finite");
    }
};

// Guard used by every closed-form expression carrying 1/sin(omega*T).
inline constexpr double kSingularSineGuard = 1e-9;

inline double checked_sin_omega_T(const PhysicalParams& p) {
    const double s = std::sin(p.omega * p.T);
    if (std::abs(s) <= kSingularSineGuard)
        throw SingularDurationError(
            "omega*T = " + std::to_string(p.omega * p.T) +
            " sits on a propagator caustic (|sin(omega T)| <= 1e-9)");
    return s;
}

}
