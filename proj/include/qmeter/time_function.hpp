#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qmeter/errors.hpp"

namespace qmeter {

// Time profile with compact support on [0, T]. Every built-in family
// except `tabulated` is symmetric about T/2 by construction (the Gaussian
// window only when its center is left at the default T/2).
class TimeFunction {
public:
    enum class Family { zero, constant, half_sine, gaussian_window, raised_cosine, tabulated };

    static TimeFunction zero(double T) { return TimeFunction(Family::zero, T); }

    static TimeFunction constant(double T, double value) {
        TimeFunction f(Family::constant, T);
        f.amplitude_ = require_finite(value, "constant amplitude");
        return f;
    }

    // amplitude * sin(pi t / T): one arch, zero at both ends.
    static TimeFunction half_sine(double T, double amplitude) {
        TimeFunction f(Family::half_sine, T);
        f.amplitude_ = require_finite(amplitude, "half_sine amplitude");
        return f;
    }

    static TimeFunction gaussian_window(double T, double amplitude, double width,
                                        double center) {
        TimeFunction f(Family::gaussian_window, T);
        f.amplitude_ = require_finite(amplitude, "gaussian_window amplitude");
        if (!(width > 0.0) || !std::isfinite(width))
            throw SchemaError("gaussian_window width must be positive");
        f.width_ = width;
        f.center_ = require_finite(center, "gaussian_window center");
        return f;
    }

    static TimeFunction gaussian_window(double T, double amplitude, double width) {
        return gaussian_window(T, amplitude, width, 0.5 * T);
    }

    // amplitude * (1 - cos(2 pi t / T)) / 2: smooth at both ends.
    static TimeFunction raised_cosine(double T, double amplitude) {
        TimeFunction f(Family::raised_cosine, T);
        f.amplitude_ = require_finite(amplitude, "raised_cosine amplitude");
        return f;
    }

    // Uniform samples over [0, T], linearly interpolated in between.
    static TimeFunction tabulated(double T, std::vector<double> samples) {
        if (samples.size() < 2)
            throw SchemaError("tabulated profile needs at least 2 samples");
        for (double v : samples)
            if (!std::isfinite(v)) throw SchemaError("tabulated profile has a non-finite sample");
        TimeFunction f(Family::tabulated, T);
        f.samples_ = std::move(samples);
        return f;
    }

    Family family() const { return family_; }
    double duration() const { return T_; }
    double amplitude() const { return amplitude_; }
    double width() const { return width_; }
    double center() const { return center_; }
    const std::vector<double>& samples() const { return samples_; }

    double operator()(double t) const {
        if (t < 0.0 || t > T_) return 0.0;
        switch (family_) {
            case Family::zero:
                return 0.0;
            case Family::constant:
                return amplitude_;
            case Family::half_sine:
                return amplitude_ * std::sin(kPi * t / T_);
            case Family::gaussian_window: {
                const double u = (t - center_) / width_;
                return amplitude_ * std::exp(-0.5 * u * u);
            }
            case Family::raised_cosine:
                return amplitude_ * 0.5 * (1.0 - std::cos(2.0 * kPi * t / T_));
            case Family::tabulated: {
                const double pos = t / T_ * static_cast<double>(samples_.size() - 1);
                const auto last = samples_.size() - 1;
                std::size_t i = static_cast<std::size_t>(std::min<double>(
                    std::max(pos, 0.0), static_cast<double>(last - 1)));
                const double frac = pos - static_cast<double>(i);
                return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
            }
        }
        return 0.0;
    }

    bool is_zero() const {
        if (family_ == Family::zero) return true;
        if (family_ == Family::tabulated)
            return std::all_of(samples_.begin(), samples_.end(),
                               [](double v) { return v == 0.0; });
        return amplitude_ == 0.0;
    }

    double max_abs() const {
        switch (family_) {
            case Family::zero:
                return 0.0;
            case Family::tabulated: {
                double m = 0.0;
                for (double v : samples_) m = std::max(m, std::abs(v));
                return m;
            }
            default:
                return std::abs(amplitude_);
        }
    }

    // Interior points where the profile is not smooth; used as quadrature
    // panel edges.
    std::vector<double> knots() const {
        std::vector<double> k;
        if (family_ == Family::tabulated) {
            const auto n = samples_.size();
            k.reserve(n - 2);
            for (std::size_t i = 1; i + 1 < n; ++i)
                k.push_back(T_ * static_cast<double>(i) / static_cast<double>(n - 1));
        }
        return k;
    }

    // Checks f(t) == f(T - t) on a dense sample set plus all knots.
    // Tolerance is absolute, scaled by max(1, sup|f|).
    bool is_midpoint_symmetric(double tol = 1e-12) const {
        const double scale = std::max(1.0, max_abs());
        auto check = [&](double t) {
            return std::abs((*this)(t) - (*this)(T_ - t)) <= tol * scale;
        };
        constexpr int kSamples = 1024;
        for (int i = 0; i <= kSamples; ++i) {
            const double t = T_ * static_cast<double>(i) / kSamples;
            if (!check(t)) return false;
        }
        for (double t : knots())
            if (!check(t)) return false;
        return true;
    }

private:
    static constexpr double kPi = 3.14159265358979323846264338327950288;

    TimeFunction(Family fam, double T) : family_(fam), T_(T) {
        if (!(T > 0.0) || !std::isfinite(T))
            throw SchemaError("time profile duration must be positive");
    }

    static double require_finite(double v, const char* what) {
        if (!std::isfinite(v)) throw SchemaError(std::string(what) + " must be finite");
        return v;
    }

    Family family_;
    double T_;
    double amplitude_ = 0.0;
    double width_ = 0.0;
    double center_ = 0.0;
    std::vector<double> samples_{};
};

}
