#pragma once

#include <cmath>
#include <vector>

#include "qmeter/params.hpp"
#include "qmeter/quadrature.hpp"
#include "qmeter/time_function.hpp"

namespace qmeter {

// Absolute tolerances for the coupling integrals.
inline constexpr double kQuadTol1D = 1e-12;
inline constexpr double kQuadTol2D = 1e-10;

// Everything the closed-form engine needs about one (params, f, f_D)
// configuration. g_eff and d are the slope and offset of the pointer
// displacement, M_eff controls its kinetic spreading, and the drive adds
// a phase affine in the midpoint coordinate (x + x')/2.
struct CouplingConstants {
    double A = 0.0;
    double B = 0.0;
    double A_D = 0.0;
    double B_D = 0.0;
    double C_D = 0.0;
    double g_eff = 0.0;
    double d = 0.0;
    double M_eff = 0.0;
    bool M_eff_infinite = false;
    double phase_c1 = 0.0;
    double phase_c0 = 0.0;
};

namespace detail {

inline QuadratureOptions profile_breakpoints(const TimeFunction& f) {
    QuadratureOptions opts;
    opts.breakpoints = f.knots();
    return opts;
}

inline QuadratureOptions profile_breakpoints(const TimeFunction& f,
                                             const TimeFunction& g) {
    QuadratureOptions opts;
    opts.breakpoints = f.knots();
    const auto extra = g.knots();
    opts.breakpoints.insert(opts.breakpoints.end(), extra.begin(), extra.end());
    return opts;
}

}  // namespace detail

// B = 2 * integral of f(t) sin(omega t) over [0, T].
inline double integral_B(const TimeFunction& f, double omega, double T) {
    return 2.0 * integrate([&](double t) { return f(t) * std::sin(omega * t); },
                           0.0, T, kQuadTol1D, detail::profile_breakpoints(f));
}

// A = double integral of f(t) f(s) sin(omega (T-t)) sin(omega s) over the
// triangle 0 <= s <= t <= T.
inline double integral_A(const TimeFunction& f, double omega, double T) {
    return integrate_triangle(
        [&](double t, double s) {
            return f(t) * f(s) * std::sin(omega * (T - t)) * std::sin(omega * s);
        },
        T, kQuadTol2D, detail::profile_breakpoints(f));
}

// C_D couples drive and measurement profiles through the same kernel as A,
// symmetrized over which profile takes the t and the s slot.
inline double integral_C_D(const TimeFunction& f, const TimeFunction& f_D,
                           double omega, double T) {
    return integrate_triangle(
        [&](double t, double s) {
            return (f_D(t) * f(s) + f(t) * f_D(s)) * std::sin(omega * (T - t)) *
                   std::sin(omega * s);
        },
        T, kQuadTol2D, detail::profile_breakpoints(f, f_D));
}

namespace detail {

inline void require_symmetric(const TimeFunction& f, const char* role) {
    if (!f.is_midpoint_symmetric())
        throw AsymmetricInputError(std::string(role) +
                                   " profile is not symmetric about T/2; the closed-form "
                                   "constants assume f(t) = f(T - t)");
}

// Splits 1/M_eff = 1/M + kick into value-or-infinite form. The bracket
// 1 + M*kick crossing zero means the quadratic term in the pointer action
// cancels the bare kinetic term.
inline void fill_effective_mass(const PhysicalParams& p, double kick,
                                CouplingConstants& c) {
    if (p.pointer_mass_infinite) {
        if (kick == 0.0) {
            c.M_eff_infinite = true;
            c.M_eff = 0.0;
        } else {
            c.M_eff_infinite = false;
            c.M_eff = 1.0 / kick;
        }
        return;
    }
    const double bracket = 1.0 + p.M * kick;
    if (std::abs(bracket) < 1e-12) {
        c.M_eff_infinite = true;
        c.M_eff = 0.0;
    } else {
        c.M_eff_infinite = false;
        c.M_eff = p.M / bracket;
    }
}

}  // namespace detail

// Closed-form measurement constants for omega > 0 away from the caustic.
inline CouplingConstants derive_constants(const PhysicalParams& params,
                                          const TimeFunction& f,
                                          const TimeFunction& f_D) {
    params.validate();
    const double s = checked_sin_omega_T(params);
    detail::require_symmetric(f, "coupling");
    detail::require_symmetric(f_D, "drive");

    const double omega = params.omega;
    const double T = params.T;
    const double m = params.m;

    CouplingConstants c;
    c.B = integral_B(f, omega, T);
    c.A = integral_A(f, omega, T);
    c.B_D = integral_B(f_D, omega, T);
    c.A_D = integral_A(f_D, omega, T);
    c.C_D = integral_C_D(f, f_D, omega, T);

    c.g_eff = c.B / (T * s);
    c.d = -c.C_D / (m * omega * T * s);
    c.phase_c1 = c.B_D / s;
    c.phase_c0 = -c.A_D / (m * omega * s);
    detail::fill_effective_mass(params, 2.0 * c.A / (m * omega * T * T * T * s), c);
    return c;
}

// The omega -> 0 limits of the same constants, written directly against the
// free-particle kernels so the frequency never enters. The raw A/B integrals
// all vanish in this limit and are reported as zero.
inline CouplingConstants derive_constants_free_particle(const PhysicalParams& params,
                                                        const TimeFunction& f,
                                                        const TimeFunction& f_D) {
    params.validate();
    detail::require_symmetric(f, "coupling");
    detail::require_symmetric(f_D, "drive");

    const double T = params.T;
    const double m = params.m;
    const auto opts_f = detail::profile_breakpoints(f);
    const auto opts_fd = detail::profile_breakpoints(f_D);
    const auto opts_mix = detail::profile_breakpoints(f, f_D);

    CouplingConstants c;

    const double first_moment_f =
        integrate([&](double t) { return t * f(t); }, 0.0, T, kQuadTol1D, opts_f);
    const double first_moment_fd =
        integrate([&](double t) { return t * f_D(t); }, 0.0, T, kQuadTol1D, opts_fd);
    const double kernel_ff = integrate_triangle(
        [&](double t, double s) { return (T - t) * s * f(t) * f(s); }, T, kQuadTol2D,
        opts_f);
    const double kernel_dd = integrate_triangle(
        [&](double t, double s) { return (T - t) * s * f_D(t) * f_D(s); }, T,
        kQuadTol2D, opts_fd);
    const double kernel_mix = integrate_triangle(
        [&](double t, double s) {
            return (T - t) * s * (f_D(t) * f(s) + f(t) * f_D(s));
        },
        T, kQuadTol2D, opts_mix);

    c.g_eff = 2.0 * first_moment_f / (T * T);
    c.d = -kernel_mix / (m * T * T);
    c.phase_c1 = 2.0 * first_moment_fd / T;
    c.phase_c0 = -kernel_dd / (m * T);
    detail::fill_effective_mass(params, 2.0 * kernel_ff / (m * T * T * T * T), c);
    return c;
}

// Dispatches on omega so callers holding a scenario never branch themselves.
inline CouplingConstants constants_for(const PhysicalParams& params,
                                       const TimeFunction& f, const TimeFunction& f_D) {
    return params.omega == 0.0 ? derive_constants_free_particle(params, f, f_D)
                               : derive_constants(params, f, f_D);
}

}
