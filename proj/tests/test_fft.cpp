#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qmeter/fft.hpp"
#include "qmeter/grid.hpp"

namespace {

// Quadratic-cost reference transform with long double accumulation.
std::vector<qmeter::cdouble> brute_dft(const std::vector<qmeter::cdouble>& x) {
    const std::size_t n = x.size();
    std::vector<qmeter::cdouble> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double re = 0.0L, im = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            const long double ang = -2.0L * 3.141592653589793238462643L *
                                    static_cast<long double>(j * k % n) / n;
            const long double c = std::cos(ang), s = std::sin(ang);
            re += x[j].real() * c - x[j].imag() * s;
            im += x[j].real() * s + x[j].imag() * c;
        }
        out[k] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

std::vector<qmeter::cdouble> random_signal(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<qmeter::cdouble> x(n);
    for (auto& v : x) v = {dist(gen), dist(gen)};
    return x;
}

}  // namespace

TEST_CASE("forward transform matches the brute-force reference", "[fft]") {
    for (std::size_t n : {std::size_t{16}, std::size_t{64}, std::size_t{256}}) {
        auto x = random_signal(n, 17u + static_cast<unsigned>(n));
        auto expected = brute_dft(x);
        qmeter::Fft fft(n);
        auto got = x;
        fft.forward(got.data());
        double scale = 0.0;
        for (auto& v : expected) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < n; ++k)
            REQUIRE(std::abs(got[k] - expected[k]) <= 1e-12 * scale);
    }
}

TEST_CASE("inverse undoes forward", "[fft]") {
    auto x = random_signal(512, 99u);
    auto y = x;
    qmeter::Fft fft(512);
    fft.forward(y.data());
    fft.inverse(y.data());
    for (std::size_t j = 0; j < x.size(); ++j)
        REQUIRE(std::abs(y[j] - x[j]) <= 1e-13);
}

TEST_CASE("Parseval holds", "[fft]") {
    const std::size_t n = 128;
    auto x = random_signal(n, 7u);
    double time_sum = 0.0;
    for (auto& v : x) time_sum += std::norm(v);
    qmeter::Fft fft(n);
    fft.forward(x.data());
    double freq_sum = 0.0;
    for (auto& v : x) freq_sum += std::norm(v);
    CHECK(freq_sum / n == Catch::Approx(time_sum).epsilon(1e-13));
}

TEST_CASE("delta and constant inputs give the textbook spectra", "[fft]") {
    const std::size_t n = 32;
    std::vector<qmeter::cdouble> delta(n, {0.0, 0.0});
    delta[0] = {1.0, 0.0};
    qmeter::Fft fft(n);
    fft.forward(delta.data());
    for (auto& v : delta) REQUIRE(std::abs(v - qmeter::cdouble{1.0, 0.0}) < 1e-14);

    std::vector<qmeter::cdouble> ones(n, {1.0, 0.0});
    fft.forward(ones.data());
    REQUIRE(std::abs(ones[0] - qmeter::cdouble{double(n), 0.0}) < 1e-12);
    for (std::size_t k = 1; k < n; ++k) REQUIRE(std::abs(ones[k]) < 1e-12);
}

TEST_CASE("linearity", "[fft]") {
    const std::size_t n = 64;
    auto x = random_signal(n, 3u);
    auto y = random_signal(n, 4u);
    const qmeter::cdouble alpha{0.7, -0.2};
    std::vector<qmeter::cdouble> combo(n);
    for (std::size_t j = 0; j < n; ++j) combo[j] = alpha * x[j] + y[j];
    qmeter::Fft fft(n);
    fft.forward(combo.data());
    fft.forward(x.data());
    fft.forward(y.data());
    for (std::size_t k = 0; k < n; ++k)
        REQUIRE(std::abs(combo[k] - (alpha * x[k] + y[k])) < 1e-12);
}

TEST_CASE("length must be a power of two", "[fft]") {
    CHECK_THROWS_AS(qmeter::Fft(24), qmeter::GridResolutionError);
    CHECK_THROWS_AS(qmeter::Fft(0), qmeter::GridResolutionError);
    CHECK(qmeter::is_power_of_two(1024));
    CHECK_FALSE(qmeter::is_power_of_two(1000));
}
