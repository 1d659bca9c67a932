#pragma once

#include <cmath>
#include <complex>

#include "qmeter/couplings.hpp"
#include "qmeter/fft.hpp"
#include "qmeter/grid.hpp"
#include "qmeter/params.hpp"

namespace qmeter {

namespace detail {

// Principal square root of v/i for real v. For v > 0 this is
// sqrt(v) * exp(-i pi/4); a negative v flips the phase to +pi/4. All
// propagator prefactors go through here so the branch is fixed in exactly
// one place.
inline cdouble sqrt_over_i(double v) {
    return std::sqrt(cdouble(0.0, -v));
}

// Compensated accumulator for phase arguments, which can reach thousands
// of radians before the exp.
struct PhaseSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double term) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

inline cdouble unit_phase(double arg) { return {std::cos(arg), std::sin(arg)}; }

}  // namespace detail

// One-body propagator over the full window, evaluated pointwise. For
// omega > 0 the modulus is constant: |k0|^2 = m omega / (2 pi |sin(omega T)|);
// omega == 0 takes the free-particle limit m / (2 pi T).
class OscillatorKernel {
public:
    explicit OscillatorKernel(const PhysicalParams& p) {
        if (p.omega > 0.0) {
            const double s = checked_sin_omega_T(p);
            cos_ = std::cos(p.omega * p.T);
            half_freq_ratio_ = p.m * p.omega / (2.0 * s);
            prefactor_ = detail::sqrt_over_i(p.m * p.omega / (kTwoPi * s));
        } else {
            cos_ = 1.0;
            half_freq_ratio_ = p.m / (2.0 * p.T);
            prefactor_ = detail::sqrt_over_i(p.m / (kTwoPi * p.T));
        }
    }

    cdouble operator()(double x, double xp) const {
        return prefactor_ * detail::unit_phase(phase(x, xp));
    }

    double phase(double x, double xp) const {
        return half_freq_ratio_ * ((x * x + xp * xp) * cos_ - 2.0 * x * xp);
    }

    cdouble prefactor() const { return prefactor_; }
    double modulus_squared() const { return std::norm(prefactor_); }
    double half_freq_ratio() const { return half_freq_ratio_; }
    double cos_omega_T() const { return cos_; }

private:
    double cos_ = 1.0;
    double half_freq_ratio_ = 0.0;
    cdouble prefactor_;
};

inline cdouble k0(const PhysicalParams& params, double x, double xp) {
    return OscillatorKernel(params)(x, xp);
}

// Pointer displacement accumulated over the window: linear in the midpoint
// of the oscillator endpoints, offset by the drive.
inline double shift(double x, double xp, const CouplingConstants& c) {
    return c.g_eff * 0.5 * (x + xp) + c.d;
}

// Free pointer kernel at the effective mass, displaced by shift_value.
inline cdouble pointer_kernel(const PhysicalParams& params, const CouplingConstants& c,
                              double X, double Xp, double shift_value) {
    if (c.M_eff_infinite)
        throw Error(
            "effective pointer mass is infinite: the pointer kernel is a delta "
            "distribution and has no pointwise values");
    const double T = params.T;
    const cdouble pref = detail::sqrt_over_i(c.M_eff / (kTwoPi * T));
    const double u = X - Xp - shift_value;
    return pref * detail::unit_phase(c.M_eff * u * u / (2.0 * T));
}

// Drive-induced phase, affine in the endpoint midpoint xbar = (x + x')/2.
inline double drive_phase(double xbar, const CouplingConstants& c) {
    detail::PhaseSum p;
    p.add(c.phase_c1 * xbar);
    p.add(c.phase_c0);
    return p.value();
}

// Full two-body propagator element <x, X| U(T) |x', X'>. Factorizes into
// oscillator kernel, drive phase and displaced pointer kernel.
inline cdouble system_propagator(const PhysicalParams& params,
                                 const CouplingConstants& c, double x, double X,
                                 double xp, double Xp) {
    const OscillatorKernel osc(params);
    const double xbar = 0.5 * (x + xp);
    return osc(x, xp) * detail::unit_phase(drive_phase(xbar, c)) *
           pointer_kernel(params, c, X, Xp, shift(x, xp, c));
}

}
