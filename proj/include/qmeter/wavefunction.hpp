#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qmeter/fft.hpp"
#include "qmeter/grid.hpp"

namespace qmeter {

struct WaveFunction1D {
    Grid1D grid;
    std::vector<cdouble> data;

    explicit WaveFunction1D(const Grid1D& g) : grid(g), data(g.n, cdouble{}) {}

    double norm_squared() const {
        double acc = 0.0;
        for (const auto& v : data) acc += std::norm(v);
        return acc * grid.spacing();
    }
    double norm() const { return std::sqrt(norm_squared()); }

    void scale(cdouble c) {
        for (auto& v : data) v *= c;
    }
    void normalize() { scale(1.0 / norm()); }

    double mean_position() const {
        double acc = 0.0, tot = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double w = std::norm(data[j]);
            acc += w * grid.point(j);
            tot += w;
        }
        return acc / tot;
    }

    double position_variance() const {
        const double mu = mean_position();
        double acc = 0.0, tot = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double w = std::norm(data[j]);
            const double d = grid.point(j) - mu;
            acc += w * d * d;
            tot += w;
        }
        return acc / tot;
    }

    // Spectral first moment of the momentum distribution.
    double momentum_mean() const {
        std::vector<cdouble> hat = data;
        Fft plan(grid.n);
        plan.forward(hat.data());
        double acc = 0.0, tot = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double w = std::norm(hat[j]);
            acc += w * grid.momentum(j);
            tot += w;
        }
        return acc / tot;
    }

    // Probability carried by the outermost cells on each side; the guard
    // against wrap-around on the periodic grid.
    double edge_probability(std::size_t band = 2) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < band; ++j)
            acc += std::norm(data[j]) + std::norm(data[grid.n - 1 - j]);
        return acc * grid.spacing();
    }
};

// Normalized Gaussian packet: (2 pi sigma^2)^(-1/4) exp(-(u-c)^2/(4 sigma^2)
// + i k u). sigma is the position standard deviation.
inline WaveFunction1D make_gaussian_packet(const Grid1D& grid, double center,
                                           double sigma, double momentum) {
    if (!(sigma >= 2.0 * grid.spacing()))
        throw GridResolutionError(
            "under-resolved packet: sigma = " + std::to_string(sigma) +
            " but grid spacing is " + std::to_string(grid.spacing()) +
            " (need sigma >= 2*spacing)");
    const double edge_l = std::abs(grid.min - center);
    const double edge_r = std::abs(grid.max - center);
    const double min_edge = std::min(edge_l, edge_r);
    if (std::exp(-min_edge * min_edge / (4.0 * sigma * sigma)) > 1e-8)
        throw GridResolutionError("packet does not fit: amplitude above 1e-8 at a grid edge");

    WaveFunction1D psi(grid);
    const double amp = std::pow(kTwoPi * sigma * sigma, -0.25);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double u = grid.point(j) - center;
        const double mag = amp * std::exp(-u * u / (4.0 * sigma * sigma));
        const double phase = momentum * grid.point(j);
        psi.data[j] = mag * cdouble{std::cos(phase), std::sin(phase)};
    }
    return psi;
}

// Narrow position state used where a formal delta appears: a Gaussian tied
// to the grid at four spacings wide.
inline double quasi_delta_sigma(const Grid1D& grid) { return 4.0 * grid.spacing(); }

inline WaveFunction1D make_quasi_delta(const Grid1D& grid, double center) {
    return make_gaussian_packet(grid, center, quasi_delta_sigma(grid), 0.0);
}

struct WaveFunction2D {
    Grid2D grid;
    std::vector<cdouble> data;  // row-major, pointer coordinate fastest

    explicit WaveFunction2D(const Grid2D& g) : grid(g), data(g.size(), cdouble{}) {}

    cdouble& at(std::size_t ix, std::size_t iX) { return data[ix * grid.X.n + iX]; }
    const cdouble& at(std::size_t ix, std::size_t iX) const {
        return data[ix * grid.X.n + iX];
    }

    double norm_squared() const {
        // Row sums are combined in index order so the result does not
        // depend on how work was scheduled.
        double acc = 0.0;
        for (std::size_t ix = 0; ix < grid.x.n; ++ix) {
            double row = 0.0;
            const cdouble* p = data.data() + ix * grid.X.n;
            for (std::size_t iX = 0; iX < grid.X.n; ++iX) row += std::norm(p[iX]);
            acc += row;
        }
        return acc * grid.cell();
    }
    double norm() const { return std::sqrt(norm_squared()); }

    std::vector<double> marginal_x() const {
        std::vector<double> p(grid.x.n, 0.0);
        for (std::size_t ix = 0; ix < grid.x.n; ++ix) {
            double row = 0.0;
            const cdouble* q = data.data() + ix * grid.X.n;
            for (std::size_t iX = 0; iX < grid.X.n; ++iX) row += std::norm(q[iX]);
            p[ix] = row * grid.X.spacing();
        }
        return p;
    }

    std::vector<double> marginal_X() const {
        std::vector<double> p(grid.X.n, 0.0);
        for (std::size_t ix = 0; ix < grid.x.n; ++ix) {
            const cdouble* q = data.data() + ix * grid.X.n;
            for (std::size_t iX = 0; iX < grid.X.n; ++iX) p[iX] += std::norm(q[iX]);
        }
        for (auto& v : p) v *= grid.x.spacing();
        return p;
    }

    double edge_probability(std::size_t band = 2) const {
        double acc = 0.0;
        const auto nx = grid.x.n, nX = grid.X.n;
        for (std::size_t ix = 0; ix < nx; ++ix)
            for (std::size_t b = 0; b < band; ++b)
                acc += std::norm(at(ix, b)) + std::norm(at(ix, nX - 1 - b));
        for (std::size_t iX = 0; iX < nX; ++iX)
            for (std::size_t b = 0; b < band; ++b)
                acc += std::norm(at(b, iX)) + std::norm(at(nx - 1 - b, iX));
        return acc * grid.cell();
    }
};

inline double distribution_mean(const Grid1D& grid, const std::vector<double>& p) {
    double acc = 0.0, tot = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        acc += p[j] * grid.point(j);
        tot += p[j];
    }
    return acc / tot;
}

inline double distribution_variance(const Grid1D& grid, const std::vector<double>& p) {
    const double mu = distribution_mean(grid, p);
    double acc = 0.0, tot = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double d = grid.point(j) - mu;
        acc += p[j] * d * d;
        tot += p[j];
    }
    return acc / tot;
}

}
