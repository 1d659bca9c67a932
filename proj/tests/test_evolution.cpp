#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qmeter/evolution.hpp"
#include "qmeter/propagator.hpp"
#include "qmeter/scenario.hpp"
#include "qmeter/transitions.hpp"

using qmeter::cdouble;
using qmeter::CouplingConstants;
using qmeter::Grid1D;
using qmeter::PhysicalParams;
using qmeter::TimeFunction;
using qmeter::WaveFunction1D;
using qmeter::WaveFunction2D;

TEST_CASE("shift taps form a partition of unity", "[evolution]") {
    for (double shift : {0.0, 0.25, -1.7, 3.999, -0.5, 12.0}) {
        const auto taps = qmeter::detail::make_shift_taps(shift);
        double sum = 0.0;
        for (double w : taps.w) sum += w;
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-14));
    }
}

TEST_CASE("resampling is exact on quintic polynomials", "[evolution]") {
    const int n = 64;
    const double coef[6] = {0.31, -0.2, 0.05, 0.013, -0.004, 0.0006};
    auto poly = [&](double u) {
        double acc = 0.0, p = 1.0;
        for (double ci : coef) {
            acc += ci * p;
            p *= (u - 30.0) / 8.0;
        }
        return acc;
    };
    std::vector<cdouble> src(n);
    for (int j = 0; j < n; ++j) src[j] = {poly(j), -0.5 * poly(j)};

    for (double shift : {0.37, -1.2, 2.75}) {
        const auto dst = qmeter::shifted_samples(src, shift);
        // Interior points only: near the ends the stencil runs off the data.
        for (int j = 12; j < n - 12; ++j) {
            REQUIRE(dst[j].real() == Catch::Approx(poly(j - shift)).margin(1e-12));
            REQUIRE(dst[j].imag() ==
                    Catch::Approx(-0.5 * poly(j - shift)).margin(1e-12));
        }
    }
}

TEST_CASE("resampling by whole cells is a pure roll", "[evolution]") {
    std::vector<cdouble> src(32);
    for (int j = 0; j < 32; ++j) src[j] = {std::sin(0.3 * j), std::cos(0.2 * j)};
    const auto dst = qmeter::shifted_samples(src, 5.0);
    for (int j = 5; j < 32; ++j) REQUIRE(std::abs(dst[j] - src[j - 5]) < 1e-15);
    for (int j = 0; j < 5; ++j) REQUIRE(std::abs(dst[j]) < 1e-15);
}

TEST_CASE("smooth profiles resample to interpolation accuracy", "[evolution]") {
    const Grid1D g{-8.0, 8.0, 256};
    auto phi = qmeter::make_gaussian_packet(g, 0.0, 8.0 * g.spacing(), 0.0);
    const double shift = 0.61;  // grid cells
    const auto dst = qmeter::shifted_samples(phi.data, shift);
    const double amp = std::pow(qmeter::kTwoPi * std::pow(8.0 * g.spacing(), 2), -0.25);
    for (std::size_t j = 40; j < g.n - 40; ++j) {
        const double u = g.point(j) - shift * g.spacing();
        const double expected =
            amp * std::exp(-u * u / (4.0 * std::pow(8.0 * g.spacing(), 2)));
        REQUIRE(dst[j].real() == Catch::Approx(expected).margin(1e-7));
    }
}

TEST_CASE("pointer spreading follows the free dispersion law", "[evolution]") {
    const Grid1D g{-8.0, 8.0, 256};
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0, false};
    CouplingConstants c;
    c.M_eff = 1.7;
    c.M_eff_infinite = false;

    auto phi0 = qmeter::make_gaussian_packet(g, 0.0, 0.5, 0.0);
    const auto phiT = qmeter::propagate_pointer_state(phi0, p, c);

    const double s2 = 0.25;
    const double expected = s2 * (1.0 + std::pow(p.T / (2.0 * c.M_eff * s2), 2));
    CHECK(phiT.norm() == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(phiT.mean_position() == Catch::Approx(0.0).margin(1e-10));
    CHECK(phiT.position_variance() == Catch::Approx(expected).epsilon(1e-9));

    CouplingConstants heavy = c;
    heavy.M_eff_infinite = true;
    const auto same = qmeter::propagate_pointer_state(phi0, p, heavy);
    for (std::size_t j = 0; j < g.n; ++j) REQUIRE(same.data[j] == phi0.data[j]);

    // A very light effective mass spreads the profile past the grid edge.
    CouplingConstants light = c;
    light.M_eff = 0.05;
    CHECK_THROWS_AS(qmeter::propagate_pointer_state(phi0, p, light),
                    qmeter::AliasingError);
}

TEST_CASE("kernel-sum one-body evolution is Ehrenfest-exact", "[evolution]") {
    const Grid1D g{-8.0, 8.0, 512};
    const PhysicalParams p{1.0, 1.0, 1.0, 1.0, false};
    const auto none = TimeFunction::zero(p.T);

    // Ground-width packet displaced to x0: a coherent state, which must
    // rotate without changing shape.
    const double sigma = 1.0 / std::sqrt(2.0);
    auto psi0 = qmeter::make_gaussian_packet(g, 1.0, sigma, 0.0);

    const auto c_free = qmeter::derive_constants(p, none, none);
    auto psiT = qmeter::driven_oscillator_evolve(psi0, p, c_free);
    CHECK(psiT.norm() == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(psiT.mean_position() == Catch::Approx(std::cos(1.0)).margin(1e-9));
    CHECK(psiT.position_variance() == Catch::Approx(sigma * sigma).epsilon(1e-8));

    // A constant drive adds the classical response displacement.
    const auto f_D = TimeFunction::constant(p.T, 0.3);
    const auto c_drv = qmeter::derive_constants(p, none, f_D);
    auto driven = qmeter::driven_oscillator_evolve(psi0, p, c_drv);
    const double response = qmeter::drive_response_F(p, f_D);
    CHECK(response ==
          Catch::Approx(0.3 * (1.0 - std::cos(1.0))).epsilon(1e-12));
    CHECK(driven.mean_position() ==
          Catch::Approx(std::cos(1.0) + response).margin(1e-8));
    CHECK(driven.norm() == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("kernel-sum evolution composes over subwindows", "[evolution]") {
    const Grid1D g{-8.0, 8.0, 512};
    const PhysicalParams pa{1.0, 1.0, 1.0, 0.4, false};
    const PhysicalParams pb{1.0, 1.0, 1.0, 0.7, false};
    const PhysicalParams pc{1.0, 1.0, 1.0, 1.1, false};

    auto constants = [](const PhysicalParams& p) {
        return qmeter::derive_constants(p, TimeFunction::zero(p.T),
                                        TimeFunction::zero(p.T));
    };
    auto psi0 = qmeter::make_gaussian_packet(g, 1.0, 1.0 / std::sqrt(2.0), 0.0);
    const auto two_step = qmeter::driven_oscillator_evolve(
        qmeter::driven_oscillator_evolve(psi0, pa, constants(pa)), pb, constants(pb));
    const auto one_step = qmeter::driven_oscillator_evolve(psi0, pc, constants(pc));
    for (std::size_t j = 0; j < g.n; ++j)
        REQUIRE(std::abs(two_step.data[j] - one_step.data[j]) < 1e-8);
}

TEST_CASE("coarse position grids are rejected before aliasing", "[evolution]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 0.5, false};
    const auto c = qmeter::derive_constants(p, TimeFunction::half_sine(p.T, 1.0),
                                            TimeFunction::zero(p.T));
    CHECK_THROWS_AS(qmeter::check_position_sampling(p, c, Grid1D{-8.0, 8.0, 128}),
                    qmeter::GridResolutionError);
    CHECK_NOTHROW(qmeter::check_position_sampling(p, c, Grid1D{-8.0, 8.0, 512}));
}

TEST_CASE("two-body evolution matches a direct propagator sum", "[evolution]") {
    const PhysicalParams p{1.0, 0.5, 1.0, 1.0, false};
    const auto f = TimeFunction::half_sine(p.T, 0.6);
    const auto f_D = TimeFunction::half_sine(p.T, 0.4);
    const auto c = qmeter::derive_constants(p, f, f_D);

    const Grid1D gx{-8.0, 8.0, 128};
    const Grid1D gX{-9.0, 9.0, 128};
    auto psi0 = qmeter::make_gaussian_packet(gx, 0.5, 0.7, 0.0);
    auto phi0 = qmeter::make_gaussian_packet(gX, 0.0, 1.0, 0.0);

    const auto outcome = qmeter::analytic_evolve_states(psi0, phi0, p, c);
    REQUIRE(std::abs(outcome.norm_final - outcome.norm_initial) < 1e-4);

    // Independent route: quadrature of the full two-body kernel over the
    // same source grid, on a spot-check set of output points.
    const double cell = gx.spacing() * gX.spacing();
    double max_err = 0.0, peak = 0.0;
    for (std::size_t i = 8; i < gx.n; i += 12) {
        for (std::size_t k = 8; k < gX.n; k += 12) {
            cdouble acc{0.0, 0.0};
            for (std::size_t a = 0; a < gx.n; ++a) {
                if (std::abs(psi0.data[a]) < 1e-12) continue;
                for (std::size_t b = 0; b < gX.n; ++b) {
                    acc += qmeter::system_propagator(p, c, gx.point(i), gX.point(k),
                                                     gx.point(a), gX.point(b)) *
                           psi0.data[a] * phi0.data[b];
                }
            }
            acc *= cell;
            max_err = std::max(max_err, std::abs(acc - outcome.state.at(i, k)));
            peak = std::max(peak, std::abs(acc));
        }
    }
    REQUIRE(peak > 0.01);
    REQUIRE(max_err < 1e-4 * peak);
}

TEST_CASE("overlap factor matches the Gaussian closed form", "[evolution]") {
    const Grid1D g{-8.0, 8.0, 512};
    const double sigma = 0.5;
    auto phi = qmeter::make_gaussian_packet(g, 0.0, sigma, 0.0);
    const qmeter::OverlapTable table(phi);

    for (double a : {0.0, 0.1, 0.5, 1.3, 3.0}) {
        const double expected = std::exp(-a * a / (8.0 * sigma * sigma));
        REQUIRE(std::abs(table.at_displacement(a) - cdouble{expected, 0.0}) < 1e-10);
        REQUIRE(std::abs(table.at_displacement(-a) - cdouble{expected, 0.0}) < 1e-10);
    }
    // Beyond half the grid the true overlap is below resolution and the
    // table reports exactly zero instead of wrapping around.
    CHECK(table.at_displacement(8.0) == cdouble{0.0, 0.0});
    CHECK(table.at_separation(2.0, 0.7) ==
          table.at_displacement(0.7));
}

TEST_CASE("overlap factor integrates to twice the inverse coupling", "[evolution]") {
    const Grid1D g{-8.0, 8.0, 512};
    auto phi = qmeter::make_gaussian_packet(g, 0.0, 0.5, 0.0);
    // Normalize to unit integral instead of unit norm.
    double integral = 0.0;
    for (auto& v : phi.data) integral += v.real() * g.spacing();
    for (auto& v : phi.data) v /= integral;

    const qmeter::OverlapTable table(phi);
    const double g_eff = 0.7;
    const double vmax = 2.0 * 8.0 / g_eff;
    const int steps = 4000;
    const double dv = 2.0 * vmax / steps;
    double acc = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double v = -vmax + i * dv;
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        acc += w * table.at_separation(v, g_eff).real() * dv;
    }
    CHECK(acc == Catch::Approx(2.0 / g_eff).epsilon(1e-8));
}

TEST_CASE("overlap-route marginal reconstructs the two-body marginal", "[evolution]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0, false};
    const auto f = TimeFunction::half_sine(p.T, 1.0);
    const auto f_D = TimeFunction::half_sine(p.T, 0.5);
    const auto c = qmeter::derive_constants(p, f, f_D);

    const Grid1D gx{-8.0, 8.0, 128};
    const Grid1D gX{-8.0, 8.0, 128};
    auto psi0 = qmeter::make_gaussian_packet(gx, 1.0, 1.0 / std::sqrt(2.0), 0.0);
    auto phi0 = qmeter::make_gaussian_packet(gX, 0.0, 0.5, 0.0);

    const auto direct = qmeter::analytic_evolve_states(psi0, phi0, p, c);
    const auto from_2d = direct.state.marginal_x();
    const auto from_overlap = qmeter::marginal_x_via_overlap(psi0, phi0, p, c);

    double l1 = 0.0;
    for (std::size_t j = 0; j < gx.n; ++j)
        l1 += std::abs(from_2d[j] - from_overlap[j]) * gx.spacing();
    CHECK(l1 < 1e-5);

    double total = 0.0;
    for (std::size_t j = 0; j < gx.n; ++j) total += from_overlap[j] * gx.spacing();
    CHECK(total == Catch::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("conditional pointer moments read row statistics", "[evolution]") {
    qmeter::Grid2D g2{{-4.0, 4.0, 64}, {-8.0, 8.0, 128}};
    auto psi = qmeter::make_gaussian_packet(g2.x, 0.0, 0.45, 0.0);
    auto phi = qmeter::make_gaussian_packet(g2.X, 0.0, 0.5, 0.0);

    // Rows displaced by an x-dependent shift; the conditional mean must
    // recover the shift row by row.
    WaveFunction2D state(g2);
    for (std::size_t i = 0; i < g2.x.n; ++i) {
        const double s = 0.3 + 0.05 * g2.x.point(i);
        const auto row = qmeter::shifted_samples(phi.data, s / g2.X.spacing());
        for (std::size_t k = 0; k < g2.X.n; ++k)
            state.at(i, k) = psi.data[i] * row[k];
    }

    const auto moments = qmeter::conditional_pointer_moments(state);
    const auto density = state.marginal_x();
    for (std::size_t i = 0; i < g2.x.n; ++i) {
        if (density[i] < 1e-4) continue;
        REQUIRE(moments.density[i] == Catch::Approx(density[i]).epsilon(1e-12));
        REQUIRE(moments.mean[i] ==
                Catch::Approx(0.3 + 0.05 * g2.x.point(i)).margin(1e-5));
        REQUIRE(moments.variance[i] == Catch::Approx(0.25).epsilon(1e-3));
    }
}

TEST_CASE("shifts leaving the pointer grid are caught by the norm guard",
          "[evolution]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0, false};
    const auto f = TimeFunction::constant(p.T, 1.2);
    const auto c = qmeter::derive_constants(p, f, TimeFunction::zero(p.T));

    const Grid1D gx{-8.0, 8.0, 256};
    const Grid1D gX{-8.0, 8.0, 128};
    auto psi0 = qmeter::make_gaussian_packet(gx, 5.0, 0.3, 0.0);
    auto phi0 = qmeter::make_gaussian_packet(gX, 0.0, 0.5, 0.0);
    CHECK_THROWS_AS(qmeter::analytic_evolve_states(psi0, phi0, p, c),
                    qmeter::NormDeviationError);
}
