#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qmeter/errors.hpp"

namespace qmeter {

using cdouble = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 transform for one fixed power-of-two length.
// Forward convention: X_k = sum_j x_j exp(-2*pi*i*j*k/n); inverse applies
// the conjugate kernel and the 1/n factor, so inverse(forward(x)) == x up
// to roundoff. The plan is immutable after construction and safe to share
// across threads.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        if (!is_power_of_two(n_) || n_ < 2)
            throw GridResolutionError("fft length must be a power of two >= 2");
        twiddle_.resize(n_ / 2);
        const double theta = -6.283185307179586476925286766559 / static_cast<double>(n_);
        for (std::size_t k = 0; k < n_ / 2; ++k) {
            double a = theta * static_cast<double>(k);
            twiddle_[k] = {std::cos(a), std::sin(a)};
        }
        bitrev_.resize(n_);
        std::size_t bits = 0;
        while ((std::size_t{1} << bits) < n_) ++bits;
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < bits; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
            bitrev_[i] = r;
        }
    }

    std::size_t size() const { return n_; }

    void forward(cdouble* data) const { transform(data, false); }

    void inverse(cdouble* data) const {
        transform(data, true);
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) data[i] *= scale;
    }

private:
    void transform(cdouble* a, bool conj) const {
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t j = bitrev_[i];
            if (j > i) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t stride = n_ / len;
            for (std::size_t base = 0; base < n_; base += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    cdouble w = twiddle_[j * stride];
                    if (conj) w = std::conj(w);
                    cdouble u = a[base + j];
                    cdouble v = a[base + j + half] * w;
                    a[base + j] = u + v;
                    a[base + j + half] = u - v;
                }
            }
        }
    }

    std::size_t n_;
    std::vector<cdouble> twiddle_;
    std::vector<std::size_t> bitrev_;
};

}
