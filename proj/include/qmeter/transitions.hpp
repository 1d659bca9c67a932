#pragma once

#include <cmath>
#include <limits>

#include "qmeter/couplings.hpp"
#include "qmeter/grid.hpp"
#include "qmeter/params.hpp"

namespace qmeter {

// Causal response of the measured coordinate to a unit impulse:
// (m d^2/dt^2 + m omega^2) G = delta(t - t'), G = 0 for t < t'.
inline double green_function(double t, double t_prime, const PhysicalParams& params) {
    if (t <= t_prime) return 0.0;
    if (params.omega == 0.0) return (t - t_prime) / params.m;
    return std::sin(params.omega * (t - t_prime)) / (params.m * params.omega);
}

// Classical displacement accumulated from the drive by the end of the
// window: F_D(T) = integral of G(T, t') f_D(t') over [0, T].
inline double drive_response_F(const PhysicalParams& params, const TimeFunction& f_D) {
    QuadratureOptions opts;
    opts.breakpoints = f_D.knots();
    return integrate(
        [&](double t) { return green_function(params.T, t, params) * f_D(t); }, 0.0,
        params.T, kQuadTol2D, opts);
}

// Time-integrated drive displacement entering the pointer record:
// G_D(T) = integral over 0 <= t'' <= t' <= T of G(t', t'') f_D(t'').
inline double drive_response_G(const PhysicalParams& params, const TimeFunction& f_D) {
    QuadratureOptions opts;
    opts.breakpoints = f_D.knots();
    return integrate_triangle(
        [&](double t, double s) { return green_function(t, s, params) * f_D(s); },
        params.T, kQuadTol2D, opts);
}

// Closed-form densities for the window as a whole. All carry units of
// inverse length squared per transition pair and stay positive only while
// omega T lies below the first caustic; beyond it they are reported as
// computed, with the regime flag raised.
struct TransitionReport {
    double p_position = 0.0;           // endpoint-to-endpoint density
    double p_average = 0.0;            // endpoint-to-midpoint density, 2x p_position
    double path_average_factor = 0.0;  // omega T / tan(omega T / 2)
    double p_pointer = 0.0;            // pointer endpoint density, M/(2 pi T)
    double p_sharp_pointer = 0.0;      // sharp-pointer level, m omega/(g pi sin omega T)
    double p_sharp_pointer_free = 0.0; // its frequency-free form, m/(g pi T)
    double F_D = 0.0;                  // classical drive response at T
    double G_D = 0.0;                  // window-integrated drive response
    bool nonphysical_regime = false;
};

inline TransitionReport transition_probabilities(const PhysicalParams& params,
                                                 const CouplingConstants& c) {
    params.validate();
    const double m = params.m;
    const double T = params.T;
    const double omega = params.omega;

    TransitionReport r;
    if (omega > 0.0) {
        const double s = std::sin(omega * T);
        r.p_position = m * omega / (kTwoPi * s);
        r.p_sharp_pointer = m * omega / (c.g_eff * kPi * s);
        r.path_average_factor = omega * T / std::tan(0.5 * omega * T);
        r.nonphysical_regime = !(s > kSingularSineGuard);
    } else {
        r.p_position = m / (kTwoPi * T);
        r.p_sharp_pointer = m / (c.g_eff * kPi * T);
        r.path_average_factor = 2.0;
    }
    r.p_average = 2.0 * r.p_position;
    r.p_sharp_pointer_free = m / (c.g_eff * kPi * T);
    r.p_pointer = params.pointer_mass_infinite
                      ? std::numeric_limits<double>::infinity()
                      : params.M / (kTwoPi * T);
    return r;
}

// Full report for a configured run; only the drive-response fields see f_D.
inline TransitionReport transition_report_with_drive(const PhysicalParams& params,
                                                     const CouplingConstants& c,
                                                     const TimeFunction& f_D) {
    TransitionReport r = transition_probabilities(params, c);
    r.F_D = drive_response_F(params, f_D);
    r.G_D = drive_response_G(params, f_D);
    return r;
}

// Mean pointer position after the window for a constant coupling of
// strength g0, from the solved equations of motion. Exact in expectation
// for states with <P(0)> = 0.
inline double pointer_final_mean(const PhysicalParams& params,
                                 const CouplingConstants& /*unused*/, double x0,
                                 double p0, double X0, double P0, double g0,
                                 const TimeFunction& f_D) {
    params.validate();
    const double m = params.m;
    const double T = params.T;
    const double omega = params.omega;
    double momentum_term, position_term;
    if (omega > 0.0) {
        const double half = std::sin(0.5 * omega * T);
        momentum_term = 2.0 * p0 * half * half / (m * omega * omega);
        position_term = x0 * std::sin(omega * T) / omega;
    } else {
        momentum_term = p0 * T * T / (2.0 * m);
        position_term = x0 * T;
    }
    const double G_D = drive_response_G(params, f_D);
    return X0 + P0 * T * params.inv_M() +
           (g0 / T) * (momentum_term + position_term + G_D);
}

}
