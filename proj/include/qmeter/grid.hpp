#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "qmeter/errors.hpp"

namespace qmeter {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Uniform periodic grid: point j sits at min + j*spacing for j in [0, n),
// spacing = (max - min)/n. The right endpoint is the wrap-around image of
// the left one, which makes plain Riemann sums spectrally accurate for
// decaying integrands and matches the discrete-transform convention.
struct Grid1D {
    double min = -8.0;
    double max = 8.0;
    std::size_t n = 256;

    double extent() const { return max - min; }
    double spacing() const { return extent() / static_cast<double>(n); }
    double point(std::size_t j) const { return min + spacing() * static_cast<double>(j); }

    // Transform frequency of bin j, ordered the way the FFT lays them out.
    double momentum(std::size_t j) const {
        const auto half = n / 2;
        const double idx = (j < half) ? static_cast<double>(j)
                                      : static_cast<double>(j) - static_cast<double>(n);
        return kTwoPi * idx / extent();
    }

    double momentum_max() const { return kPi / spacing(); }

    bool operator==(const Grid1D&) const = default;

    void validate(const char* name) const {
        if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
            throw SchemaError(std::string(name) + ": bounds must be finite with max > min");
        if (n < 16)
            throw SchemaError(std::string(name) + ": need at least 16 points");
        if ((n & (n - 1)) != 0)
            throw SchemaError(std::string(name) + ": point count must be a power of two");
    }
};

struct Grid2D {
    Grid1D x;  // oscillator coordinate
    Grid1D X;  // pointer coordinate

    double cell() const { return x.spacing() * X.spacing(); }
    std::size_t size() const { return x.n * X.n; }

    bool operator==(const Grid2D&) const = default;
};

}
