#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qmeter/fft.hpp"
#include "qmeter/parallel.hpp"
#include "qmeter/propagator.hpp"
#include "qmeter/scenario.hpp"
#include "qmeter/wavefunction.hpp"

namespace qmeter {

inline constexpr double kNormDeviationTol = 1e-4;
inline constexpr double kPointerEdgeTol = 1e-7;
inline constexpr double kActiveSourceCut = 1e-13;

namespace detail {

// Quintic Lagrange taps for sampling a gridded profile at a constant
// off-grid displacement. All targets share one fractional offset, so the
// weights are computed once and each tap becomes a contiguous AXPY.
struct ShiftTaps {
    int offset[6];
    double w[6];
};

inline ShiftTaps make_shift_taps(double shift_cells) {
    const double q = std::floor(shift_cells);
    const int qi = static_cast<int>(q);
    // Sample position in stencil coordinates; nodes sit at 0..5 and the
    // target lies in the middle interval (2, 3].
    const double t = 3.0 - (shift_cells - q);
    ShiftTaps taps;
    for (int tap = 0; tap < 6; ++tap) {
        double w = 1.0;
        for (int r = 0; r < 6; ++r)
            if (r != tap) w *= (t - r) / (tap - r);
        taps.w[tap] = w;
        taps.offset[tap] = tap - qi - 3;
    }
    return taps;
}

// row[j] += coeff * src(j - shift_cells), src taken as zero outside [0, n).
inline void add_shifted(cdouble* row, const cdouble* src, int n, const ShiftTaps& taps,
                        cdouble coeff) {
    for (int tap = 0; tap < 6; ++tap) {
        const int o = taps.offset[tap];
        const int j0 = std::max(0, -o);
        const int j1 = std::min(n, n - o);
        if (j0 >= j1) continue;
        const cdouble a = coeff * taps.w[tap];
        const cdouble* s = src + o;
        for (int j = j0; j < j1; ++j) row[j] += a * s[j];
    }
}

}  // namespace detail

// Resamples src at positions j - shift_cells (grid units), zero outside.
inline std::vector<cdouble> shifted_samples(const std::vector<cdouble>& src,
                                            double shift_cells) {
    std::vector<cdouble> dst(src.size(), cdouble(0.0, 0.0));
    const auto taps = detail::make_shift_taps(shift_cells);
    detail::add_shifted(dst.data(), src.data(), static_cast<int>(src.size()), taps,
                        cdouble(1.0, 0.0));
    return dst;
}

// Largest phase advance of the source integrand per grid step. Kernel sums
// over the source grid are only faithful while this stays below pi.
inline double position_sampling_rate(const PhysicalParams& params,
                                     const CouplingConstants& c, const Grid1D& grid_x) {
    const OscillatorKernel osc(params);
    const double L = std::max(std::abs(grid_x.min), std::abs(grid_x.max));
    return 2.0 * std::abs(osc.half_freq_ratio()) * L * (1.0 + std::abs(osc.cos_omega_T())) +
           0.5 * std::abs(c.phase_c1);
}

inline void check_position_sampling(const PhysicalParams& params,
                                    const CouplingConstants& c, const Grid1D& grid_x) {
    const double advance = position_sampling_rate(params, c, grid_x) * grid_x.spacing();
    if (!(advance < kPi))
        throw GridResolutionError(
            "position grid cannot resolve the propagator oscillation (phase advance " +
            std::to_string(advance) + " rad per step, limit pi); increase grid_x n");
}

// Free spreading of the pointer profile over the full window at the
// effective mass, applied as an exact spectral multiplier.
inline WaveFunction1D propagate_pointer_state(const WaveFunction1D& phi0,
                                              const PhysicalParams& params,
                                              const CouplingConstants& c) {
    WaveFunction1D phi = phi0;
    if (!c.M_eff_infinite) {
        Fft fft(phi.grid.n);
        fft.forward(phi.data.data());
        const double rate = params.T / (2.0 * c.M_eff);
        for (std::size_t k = 0; k < phi.grid.n; ++k) {
            const double kk = phi.grid.momentum(k);
            phi.data[k] *= detail::unit_phase(-rate * kk * kk);
        }
        fft.inverse(phi.data.data());
    }
    const double edge = phi.edge_probability();
    if (edge > kPointerEdgeTol)
        throw AliasingError(
            "pointer profile reached the grid edge while spreading (edge probability " +
            std::to_string(edge) + "); enlarge grid_X");
    return phi;
}

// Driven one-body evolution by direct kernel summation. The drive enters
// as an affine phase in the endpoint midpoint; profiles must be symmetric
// about T/2, which the constants derivation has already enforced.
inline WaveFunction1D driven_oscillator_evolve(const WaveFunction1D& psi0,
                                               const PhysicalParams& params,
                                               const CouplingConstants& c) {
    check_position_sampling(params, c, psi0.grid);
    const OscillatorKernel osc(params);
    const std::size_t n = psi0.grid.n;
    const double dx = psi0.grid.spacing();
    std::vector<cdouble> weighted(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xp = psi0.grid.point(j);
        weighted[j] =
            dx * psi0.data[j] * detail::unit_phase(0.5 * c.phase_c1 * xp + c.phase_c0);
    }
    WaveFunction1D out(psi0.grid);
    parallel_for(n, [&](std::size_t i) {
        const double x = psi0.grid.point(i);
        cdouble acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            acc += detail::unit_phase(osc.phase(x, psi0.grid.point(j)) +
                                      0.5 * c.phase_c1 * x) *
                   weighted[j];
        out.data[i] = osc.prefactor() * acc;
    });
    const double dev = std::abs(out.norm() - psi0.norm());
    if (dev > kNormDeviationTol * psi0.norm())
        throw NormDeviationError("one-body evolution lost norm (deviation " +
                                 std::to_string(dev) +
                                 "); the state may spread past grid_x");
    return out;
}

struct EvolveOutcome {
    WaveFunction2D state;
    double norm_initial = 0.0;
    double norm_final = 0.0;
};

// Closed-form two-body evolution of a product state. For each source point
// x' the freely spread pointer profile is displaced by shift(x, x') and
// accumulated into row x with the kernel weight; displacement resampling
// uses the shared-offset quintic taps.
inline EvolveOutcome analytic_evolve_states(const WaveFunction1D& psi0,
                                            const WaveFunction1D& phi0,
                                            const PhysicalParams& params,
                                            const CouplingConstants& c) {
    check_position_sampling(params, c, psi0.grid);
    const WaveFunction1D phiT = propagate_pointer_state(phi0, params, c);
    const OscillatorKernel osc(params);
    const Grid1D gx = psi0.grid;
    const std::size_t nx = gx.n;
    const int nX = static_cast<int>(phi0.grid.n);
    const double dx = gx.spacing();
    const double dX = phi0.grid.spacing();

    // Source points with negligible amplitude cannot contribute: the kernel
    // modulus is the same for every source point.
    double peak = 0.0;
    for (const cdouble& v : psi0.data) peak = std::max(peak, std::abs(v));
    std::size_t j_lo = nx, j_hi = 0;
    for (std::size_t j = 0; j < nx; ++j) {
        if (std::abs(psi0.data[j]) >= kActiveSourceCut * peak) {
            j_lo = std::min(j_lo, j);
            j_hi = std::max(j_hi, j + 1);
        }
    }

    WaveFunction2D state(Grid2D{gx, phi0.grid});
    parallel_for(nx, [&](std::size_t i) {
        const double x = gx.point(i);
        cdouble* row = &state.at(i, 0);
        for (std::size_t j = j_lo; j < j_hi; ++j) {
            const double xp = gx.point(j);
            const cdouble coeff =
                dx * psi0.data[j] * osc.prefactor() *
                detail::unit_phase(osc.phase(x, xp) + drive_phase(0.5 * (x + xp), c));
            const double s = shift(x, xp, c);
            detail::add_shifted(row, phiT.data.data(), nX,
                                detail::make_shift_taps(s / dX), coeff);
        }
    });

    EvolveOutcome out{std::move(state), psi0.norm() * phi0.norm(), 0.0};
    out.norm_final = out.state.norm();
    const double dev = std::abs(out.norm_final - out.norm_initial);
    if (dev > kNormDeviationTol * out.norm_initial)
        throw NormDeviationError(
            "two-body evolution lost norm (deviation " + std::to_string(dev) +
            "); check that grid_x contains the spread state and grid_X covers the "
            "pointer shift range");
    return out;
}

inline EvolveOutcome analytic_evolve(const Scenario& sc) {
    sc.validate();
    const CouplingConstants c = sc.constants();
    return analytic_evolve_states(sc.oscillator_state(), sc.pointer_state(), sc.params, c);
}

// Translation overlap of the pointer state, computed spectrally:
// overlap(a) = integral of conj(phi(X + a)) phi(X) dX. Exact while the
// state's tails have decayed before the grid edge; zero once the
// translation exceeds half the grid, where the transform would wrap.
class OverlapTable {
public:
    explicit OverlapTable(const WaveFunction1D& phi)
        : half_extent_(0.5 * phi.grid.extent()) {
        const std::size_t n = phi.grid.n;
        std::vector<cdouble> spectrum(phi.data);
        Fft fft(n);
        fft.forward(spectrum.data());
        power_.resize(n);
        momentum_.resize(n);
        const double scale = phi.grid.spacing() / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            power_[k] = scale * std::norm(spectrum[k]);
            momentum_[k] = phi.grid.momentum(k);
        }
    }

    cdouble at_displacement(double a) const {
        if (std::abs(a) >= half_extent_) return {0.0, 0.0};
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < power_.size(); ++k) {
            const double arg = -momentum_[k] * a;
            re += power_[k] * std::cos(arg);
            im += power_[k] * std::sin(arg);
        }
        return {re, im};
    }

    // Overlap between runs whose measured coordinates differ by v; the
    // pointer records them g_eff * v / 2 apart.
    cdouble at_separation(double v, double g_eff) const {
        return at_displacement(0.5 * g_eff * v);
    }

private:
    double half_extent_;
    std::vector<double> power_;
    std::vector<double> momentum_;
};

// Position marginal after the window, without forming the two-body state:
// P(x) = sum over source pairs of k0(x,x') conj(k0(x,x'')) psi(x')
// conj(psi(x'')) e^{i c1 (x'-x'')/2} overlap(g_eff (x'-x'')/2). Each row
// reduces to an autocorrelation, done with zero-padded transforms. Exact
// for any pointer width, including regimes where the two-body state would
// not fit on a grid.
inline std::vector<double> marginal_x_via_overlap(const WaveFunction1D& psi0,
                                                  const WaveFunction1D& phi0,
                                                  const PhysicalParams& params,
                                                  const CouplingConstants& c) {
    check_position_sampling(params, c, psi0.grid);
    const OscillatorKernel osc(params);
    const std::size_t n = psi0.grid.n;
    const double dx = psi0.grid.spacing();

    const OverlapTable table(phi0);
    std::vector<cdouble> lag(n);
    for (std::size_t j = 0; j < n; ++j)
        lag[j] = table.at_separation(static_cast<double>(j) * dx, c.g_eff);

    std::vector<cdouble> weighted(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xp = psi0.grid.point(j);
        weighted[j] = dx * psi0.data[j] * detail::unit_phase(0.5 * c.phase_c1 * xp);
    }

    std::size_t padded = 1;
    while (padded < 2 * n) padded *= 2;
    std::vector<double> out(n, 0.0);
    const double mod2 = osc.modulus_squared();

    parallel_for_blocks(n, [&](std::size_t lo, std::size_t hi) {
        Fft fft(padded);
        std::vector<cdouble> row(padded);
        for (std::size_t i = lo; i < hi; ++i) {
            const double x = psi0.grid.point(i);
            std::fill(row.begin(), row.end(), cdouble(0.0, 0.0));
            for (std::size_t j = 0; j < n; ++j)
                row[j] = weighted[j] * detail::unit_phase(osc.phase(x, psi0.grid.point(j)));
            fft.forward(row.data());
            for (std::size_t k = 0; k < padded; ++k)
                row[k] = cdouble(std::norm(row[k]), 0.0);
            fft.inverse(row.data());
            // row[j] now holds the lag-j autocorrelation; negative lags pair
            // with positive ones by conjugation, leaving twice the real part.
            double acc = row[0].real() * lag[0].real();
            for (std::size_t j = 1; j < n; ++j)
                acc += 2.0 * (row[j] * lag[j]).real();
            out[i] = mod2 * acc;
        }
    });
    return out;
}

struct ConditionalMoments {
    std::vector<double> density;
    std::vector<double> mean;
    std::vector<double> variance;
};

// Pointer statistics conditioned on the measured coordinate: for each x row,
// the x-marginal density plus mean and variance of X within the row.
inline ConditionalMoments conditional_pointer_moments(const WaveFunction2D& state) {
    const std::size_t nx = state.grid.x.n;
    const std::size_t nX = state.grid.X.n;
    const double dX = state.grid.X.spacing();
    ConditionalMoments m;
    m.density.assign(nx, 0.0);
    m.mean.assign(nx, 0.0);
    m.variance.assign(nx, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        double w = 0.0, wx = 0.0;
        for (std::size_t k = 0; k < nX; ++k) {
            const double p = std::norm(state.at(i, k));
            w += p;
            wx += p * state.grid.X.point(k);
        }
        m.density[i] = w * dX;
        if (w <= 0.0) continue;
        const double mean = wx / w;
        double wv = 0.0;
        for (std::size_t k = 0; k < nX; ++k) {
            const double u = state.grid.X.point(k) - mean;
            wv += std::norm(state.at(i, k)) * u * u;
        }
        m.mean[i] = mean;
        m.variance[i] = wv / w;
    }
    return m;
}

}
