#pragma once

#include <cstdint>
#include <cstring>

#include "qmeter/couplings.hpp"
#include "qmeter/grid.hpp"
#include "qmeter/params.hpp"
#include "qmeter/time_function.hpp"
#include "qmeter/wavefunction.hpp"

namespace qmeter {

// Initial oscillator wave function. A quasi-delta is a Gaussian whose width
// tracks the grid spacing, so only the center is configurable.
struct OscillatorStateSpec {
    enum class Kind { gaussian, quasi_delta };
    Kind kind = Kind::gaussian;
    double center = 0.0;
    double sigma = 1.0;
    double momentum = 0.0;
};

// Initial pointer wave function, always centered at X = 0 with zero mean
// momentum so the final pointer displacement is read off directly.
struct PointerStateSpec {
    enum class Kind { gaussian, quasi_delta };
    Kind kind = Kind::gaussian;
    double sigma = 1.0;
};

struct SolverSpec {
    enum class Engine { analytic, oracle };
    Engine engine = Engine::analytic;
    double dt = 0.0;
    int splitting_order = 2;
};

namespace detail {

// FNV-1a over raw little-endian bytes. Scenario hashing feeds doubles in a
// fixed field order, so equal scenarios hash equal across runs.
struct Fnv1a {
    std::uint64_t state = 1469598103934665603ull;

    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            state ^= b[i];
            state *= 1099511628211ull;
        }
    }
    void num(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        bytes(&bits, sizeof bits);
    }
    void tag(std::uint64_t v) { bytes(&v, sizeof v); }
};

inline void hash_profile(Fnv1a& h, const TimeFunction& f) {
    h.tag(static_cast<std::uint64_t>(f.family()));
    h.num(f.duration());
    h.num(f.amplitude());
    h.num(f.width());
    h.num(f.center());
    h.tag(f.samples().size());
    for (double v : f.samples()) h.num(v);
}

}  // namespace detail

// Complete description of one run: physics, coupling and drive profiles,
// initial product state, grids and solver choice.
struct Scenario {
    PhysicalParams params;
    TimeFunction f = TimeFunction::zero(1.0);
    TimeFunction f_D = TimeFunction::zero(1.0);
    OscillatorStateSpec oscillator;
    PointerStateSpec pointer;
    Grid1D grid_x{-8.0, 8.0, 256};
    Grid1D grid_X{-8.0, 8.0, 256};
    SolverSpec solver;

    void validate() const {
        params.validate();
        if (f.duration() != params.T)
            throw SchemaError("coupling profile duration must equal T");
        if (f_D.duration() != params.T)
            throw SchemaError("drive profile duration must equal T");
        grid_x.validate("grid_x");
        grid_X.validate("grid_X");
        if (oscillator.kind == OscillatorStateSpec::Kind::gaussian) {
            if (!(oscillator.sigma > 0.0) || !std::isfinite(oscillator.sigma))
                throw SchemaError("oscillator sigma must be positive");
            if (!std::isfinite(oscillator.momentum))
                throw SchemaError("oscillator momentum must be finite");
        }
        if (!std::isfinite(oscillator.center))
            throw SchemaError("oscillator center must be finite");
        if (pointer.kind == PointerStateSpec::Kind::gaussian &&
            (!(pointer.sigma > 0.0) || !std::isfinite(pointer.sigma)))
            throw SchemaError("pointer sigma must be positive");
        if (!(solver.dt >= 0.0) || !std::isfinite(solver.dt))
            throw SchemaError("solver dt must be zero (automatic) or positive");
        if (solver.splitting_order != 2)
            throw SchemaError("only splitting_order = 2 is supported");
        if (solver.engine == SolverSpec::Engine::analytic) {
            // The closed-form route needs a regular kernel and symmetric
            // profiles; fail here rather than deep inside a run.
            if (params.omega > 0.0) checked_sin_omega_T(params);
            if (!f.is_midpoint_symmetric())
                throw AsymmetricInputError(
                    "analytic engine requires a coupling profile symmetric about T/2");
            if (!f_D.is_midpoint_symmetric())
                throw AsymmetricInputError(
                    "analytic engine requires a drive profile symmetric about T/2");
        }
    }

    WaveFunction1D oscillator_state() const {
        if (oscillator.kind == OscillatorStateSpec::Kind::quasi_delta)
            return make_quasi_delta(grid_x, oscillator.center);
        return make_gaussian_packet(grid_x, oscillator.center, oscillator.sigma,
                                    oscillator.momentum);
    }

    WaveFunction1D pointer_state() const {
        if (pointer.kind == PointerStateSpec::Kind::quasi_delta)
            return make_quasi_delta(grid_X, 0.0);
        return make_gaussian_packet(grid_X, 0.0, pointer.sigma, 0.0);
    }

    WaveFunction2D initial_state() const {
        const WaveFunction1D psi = oscillator_state();
        const WaveFunction1D phi = pointer_state();
        WaveFunction2D state(Grid2D{grid_x, grid_X});
        for (std::size_t ix = 0; ix < grid_x.n; ++ix)
            for (std::size_t iX = 0; iX < grid_X.n; ++iX)
                state.at(ix, iX) = psi.data[ix] * phi.data[iX];
        return state;
    }

    CouplingConstants constants() const { return constants_for(params, f, f_D); }

    // Stable identity of the physical content; independent of solver choice
    // so analytic and oracle runs of one scenario compare under one id.
    std::uint64_t content_hash() const {
        detail::Fnv1a h;
        h.num(params.m);
        h.tag(params.pointer_mass_infinite ? 1 : 0);
        h.num(params.pointer_mass_infinite ? 0.0 : params.M);
        h.num(params.omega);
        h.num(params.T);
        detail::hash_profile(h, f);
        detail::hash_profile(h, f_D);
        h.tag(static_cast<std::uint64_t>(oscillator.kind));
        h.num(oscillator.center);
        h.num(oscillator.sigma);
        h.num(oscillator.momentum);
        h.tag(static_cast<std::uint64_t>(pointer.kind));
        h.num(pointer.sigma);
        h.num(grid_x.min);
        h.num(grid_x.max);
        h.tag(static_cast<std::uint64_t>(grid_x.n));
        h.num(grid_X.min);
        h.num(grid_X.max);
        h.tag(static_cast<std::uint64_t>(grid_X.n));
        return h.state;
    }
};

}
