#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qmeter/fft.hpp"
#include "qmeter/scenario.hpp"
#include "qmeter/wavefunction.hpp"

namespace qmeter {

inline constexpr double kOracleEdgeTol = 1e-6;
inline constexpr double kOracleSafety = 0.8;

namespace detail {

// Keeps a recurrence-generated phasor on the unit circle; one Newton step
// for 1/sqrt(|z|^2) is enough because the drift per multiply is O(eps).
inline cdouble renorm_phasor(cdouble z) {
    return z * (1.5 - 0.5 * std::norm(z));
}

}  // namespace detail

// Direct second-order split-operator integrator for the two-body equation
//   i dpsi/dt = [ p^2/2m + (m omega^2/2) x^2 - f_D(t) x
//                 + P^2/2M + f(t) x P / T ] psi.
// Shares nothing with the closed-form engine beyond the transform plan: no
// derived constants, no symmetry assumptions, arbitrary profiles.
//
// One step, profiles frozen at the step midpoint:
//   half potential (diagonal in x)
//   half pointer kinetic + coupling (diagonal in (x, P))
//   full oscillator kinetic (diagonal in (k_x, P))
//   half pointer kinetic + coupling, half potential.
class SplitStepper {
public:
    SplitStepper(const Grid2D& grid, const PhysicalParams& params, const TimeFunction& f,
                 const TimeFunction& f_D, double dt)
        : grid_(grid),
          params_(params),
          f_(f),
          f_D_(f_D),
          dt_(dt),
          fft_x_(grid.x.n),
          fft_X_(grid.X.n) {
        const double limit = max_stable_dt(grid, params, f, f_D);
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw SchemaError("oracle time step must be positive");
        if (dt > limit)
            throw PhaseBoundError(
                "time step " + std::to_string(dt) +
                    " exceeds the quarter-pi substep phase bound (limit " +
                    std::to_string(limit) + ")",
                kOracleSafety * limit);

        const std::size_t nx = grid.x.n;
        const std::size_t nX = grid.X.n;
        kin_x_.resize(nx);
        for (std::size_t j = 0; j < nx; ++j) {
            const double k = grid.x.momentum(j);
            const double arg = -dt * k * k / (2.0 * params.m);
            kin_x_[j] = {std::cos(arg), std::sin(arg)};
        }
        ptr_half_.resize(nX);
        const double invM = params.inv_M();
        for (std::size_t k = 0; k < nX; ++k) {
            const double P = grid.X.momentum(k);
            const double arg = -0.25 * dt * P * P * invM;
            ptr_half_[k] = {std::cos(arg), std::sin(arg)};
        }
        harmonic_half_.resize(nx);
        for (std::size_t j = 0; j < nx; ++j) {
            const double x = grid.x.point(j);
            const double arg = -0.25 * dt * params.m * params.omega * params.omega * x * x;
            harmonic_half_[j] = {std::cos(arg), std::sin(arg)};
        }
        col_scratch_.resize(nx);
    }

    double dt() const { return dt_; }

    // Largest step honoring a quarter-pi phase advance per substep, using
    // the profile maxima so the bound holds across the whole window.
    static double max_stable_dt(const Grid2D& grid, const PhysicalParams& params,
                                const TimeFunction& f, const TimeFunction& f_D) {
        const double Lx =
            std::max(std::abs(grid.x.min), std::abs(grid.x.max));
        const double kx = grid.x.momentum_max();
        const double kX = grid.X.momentum_max();
        const double r_pot =
            0.5 * params.m * params.omega * params.omega * Lx * Lx + f_D.max_abs() * Lx;
        const double r_mix = f.max_abs() * Lx * kX / params.T +
                             0.5 * kX * kX * params.inv_M();
        const double r_kin = 0.5 * kx * kx / params.m;
        double limit = kPi / (4.0 * r_kin);
        if (r_pot > 0.0) limit = std::min(limit, kPi / (2.0 * r_pot));
        if (r_mix > 0.0) limit = std::min(limit, kPi / (2.0 * r_mix));
        return limit;
    }

    // Advances psi from t0 to t0 + dt in place.
    void step(WaveFunction2D& psi, double t0) const {
        const double t_mid = t0 + 0.5 * dt_;
        const double drive = f_D_(t_mid);
        const double couple = f_(t_mid);

        apply_potential_half(psi, drive);
        rows_forward(psi);
        apply_mix_half(psi, couple);
        cols_forward(psi);
        apply_kin_x(psi);
        cols_inverse(psi);
        apply_mix_half(psi, couple);
        rows_inverse(psi);
        apply_potential_half(psi, drive);
    }

private:
    void apply_potential_half(WaveFunction2D& psi, double drive) const {
        const std::size_t nx = grid_.x.n, nX = grid_.X.n;
        for (std::size_t j = 0; j < nx; ++j) {
            const double arg = 0.5 * dt_ * drive * grid_.x.point(j);
            const cdouble v = harmonic_half_[j] * cdouble{std::cos(arg), std::sin(arg)};
            cdouble* row = &psi.at(j, 0);
            for (std::size_t k = 0; k < nX; ++k) row[k] *= v;
        }
    }

    // In the (x, P) representation both the pointer kinetic term and the
    // coupling are diagonal. The coupling phase is linear in P with a
    // row-dependent slope, so each row walks a unit phasor instead of
    // calling the trig functions per point.
    void apply_mix_half(WaveFunction2D& psi, double couple) const {
        const std::size_t nx = grid_.x.n, nX = grid_.X.n;
        const std::size_t half = nX / 2;
        const double dP = kTwoPi / grid_.X.extent();
        for (std::size_t j = 0; j < nx; ++j) {
            const double slope = 0.5 * dt_ * couple * grid_.x.point(j) / params_.T;
            const double arg = -slope * dP;
            const cdouble base{std::cos(arg), std::sin(arg)};
            cdouble* row = &psi.at(j, 0);
            cdouble up{1.0, 0.0};
            for (std::size_t k = 0; k < half; ++k) {
                row[k] *= ptr_half_[k] * up;
                up = detail::renorm_phasor(up * base);
            }
            cdouble down = std::conj(base);
            for (std::size_t t = 0; t < half; ++t) {
                const std::size_t k = nX - 1 - t;
                row[k] *= ptr_half_[k] * down;
                down = detail::renorm_phasor(down * std::conj(base));
            }
        }
    }

    void apply_kin_x(WaveFunction2D& psi) const {
        const std::size_t nx = grid_.x.n, nX = grid_.X.n;
        for (std::size_t j = 0; j < nx; ++j) {
            const cdouble v = kin_x_[j];
            cdouble* row = &psi.at(j, 0);
            for (std::size_t k = 0; k < nX; ++k) row[k] *= v;
        }
    }

    void rows_forward(WaveFunction2D& psi) const {
        for (std::size_t j = 0; j < grid_.x.n; ++j) fft_X_.forward(&psi.at(j, 0));
    }
    void rows_inverse(WaveFunction2D& psi) const {
        for (std::size_t j = 0; j < grid_.x.n; ++j) fft_X_.inverse(&psi.at(j, 0));
    }

    void cols_forward(WaveFunction2D& psi) const { cols_transform(psi, false); }
    void cols_inverse(WaveFunction2D& psi) const { cols_transform(psi, true); }

    void cols_transform(WaveFunction2D& psi, bool inverse) const {
        const std::size_t nx = grid_.x.n, nX = grid_.X.n;
        auto& scratch = col_scratch_;
        for (std::size_t k = 0; k < nX; ++k) {
            for (std::size_t j = 0; j < nx; ++j) scratch[j] = psi.at(j, k);
            if (inverse)
                fft_x_.inverse(scratch.data());
            else
                fft_x_.forward(scratch.data());
            for (std::size_t j = 0; j < nx; ++j) psi.at(j, k) = scratch[j];
        }
    }

    Grid2D grid_;
    PhysicalParams params_;
    TimeFunction f_;
    TimeFunction f_D_;
    double dt_;
    Fft fft_x_;
    Fft fft_X_;
    std::vector<cdouble> kin_x_;
    std::vector<cdouble> ptr_half_;
    std::vector<cdouble> harmonic_half_;
    mutable std::vector<cdouble> col_scratch_;
};

// Mean pointer momentum of the two-body state; the Hamiltonian never
// depends on X, so the integrator must conserve this exactly.
inline double mean_pointer_momentum(const WaveFunction2D& state) {
    const std::size_t nx = state.grid.x.n, nX = state.grid.X.n;
    Fft fft(nX);
    std::vector<cdouble> row(nX);
    std::vector<double> weight(nX, 0.0);
    for (std::size_t j = 0; j < nx; ++j) {
        const cdouble* src = &state.at(j, 0);
        std::copy(src, src + nX, row.begin());
        fft.forward(row.data());
        for (std::size_t k = 0; k < nX; ++k) weight[k] += std::norm(row[k]);
    }
    double acc = 0.0, tot = 0.0;
    for (std::size_t k = 0; k < nX; ++k) {
        acc += weight[k] * state.grid.X.momentum(k);
        tot += weight[k];
    }
    return acc / tot;
}

struct OracleRun {
    WaveFunction2D state;
    double dt = 0.0;
    std::size_t steps = 0;
    double norm_initial = 0.0;
    double norm_final = 0.0;
    double mean_P_initial = 0.0;
    double mean_P_final = 0.0;
};

// Runs the split-operator integrator over the full window. requested_dt = 0
// picks the largest step within the phase bound (with a safety margin); an
// explicit step is honored after rounding so the steps tile T exactly.
inline OracleRun oracle_evolve_state(WaveFunction2D psi, const PhysicalParams& params,
                                     const TimeFunction& f, const TimeFunction& f_D,
                                     double requested_dt) {
    params.validate();
    const double limit = SplitStepper::max_stable_dt(psi.grid, params, f, f_D);
    double dt = requested_dt;
    if (dt == 0.0) dt = kOracleSafety * limit;
    if (dt > limit)
        throw PhaseBoundError("time step " + std::to_string(dt) +
                                  " exceeds the quarter-pi substep phase bound (limit " +
                                  std::to_string(limit) + ")",
                              kOracleSafety * limit);
    const auto steps =
        static_cast<std::size_t>(std::ceil(params.T / dt * (1.0 - 1e-12)));
    dt = params.T / static_cast<double>(steps);

    SplitStepper stepper(psi.grid, params, f, f_D, dt);
    OracleRun run{std::move(psi), dt, steps, 0.0, 0.0, 0.0, 0.0};
    run.norm_initial = run.state.norm();
    run.mean_P_initial = mean_pointer_momentum(run.state);
    for (std::size_t s = 0; s < steps; ++s) {
        stepper.step(run.state, dt * static_cast<double>(s));
        const double edge = run.state.edge_probability();
        if (edge > kOracleEdgeTol)
            throw AliasingError("state reached the grid edge at step " +
                                std::to_string(s + 1) + " (edge probability " +
                                std::to_string(edge) + "); enlarge the grids");
    }
    run.norm_final = run.state.norm();
    run.mean_P_final = mean_pointer_momentum(run.state);
    return run;
}

inline OracleRun oracle_evolve(const Scenario& sc) {
    sc.validate();
    return oracle_evolve_state(sc.initial_state(), sc.params, sc.f, sc.f_D,
                               sc.solver.dt);
}

}
