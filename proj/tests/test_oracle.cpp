#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qmeter/oracle.hpp"
#include "qmeter/transitions.hpp"

using qmeter::Grid1D;
using qmeter::Grid2D;
using qmeter::PhysicalParams;
using qmeter::TimeFunction;
using qmeter::WaveFunction2D;

namespace {

WaveFunction2D product_state(const Grid2D& grid, double x_center, double x_sigma,
                             double x_momentum, double X_sigma, double X_momentum = 0.0) {
    const auto psi = qmeter::make_gaussian_packet(grid.x, x_center, x_sigma, x_momentum);
    const auto phi = qmeter::make_gaussian_packet(grid.X, 0.0, X_sigma, X_momentum);
    WaveFunction2D state(grid);
    for (std::size_t i = 0; i < grid.x.n; ++i)
        for (std::size_t k = 0; k < grid.X.n; ++k)
            state.at(i, k) = psi.data[i] * phi.data[k];
    return state;
}

double l2_distance(const WaveFunction2D& a, const WaveFunction2D& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += std::norm(a.data[i] - b.data[i]);
    return std::sqrt(acc * a.grid.x.spacing() * a.grid.X.spacing());
}

const Grid2D kGrid{{-8.0, 8.0, 64}, {-8.0, 8.0, 64}};

}  // namespace

TEST_CASE("integrator holds the oscillator ground state", "[oracle]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0, false};
    const auto none = TimeFunction::zero(p.T);
    auto state = product_state(kGrid, 0.0, 1.0 / std::sqrt(2.0), 0.0, 0.5);
    const auto before = state.marginal_x();

    const auto run = qmeter::oracle_evolve_state(std::move(state), p, none, none, 5e-4);
    CHECK(run.steps == 2000);
    CHECK(std::abs(run.norm_final - run.norm_initial) < 1e-10);

    const auto after = run.state.marginal_x();
    CHECK(std::abs(qmeter::distribution_mean(kGrid.x, after)) < 1e-12);
    CHECK(qmeter::distribution_variance(kGrid.x, after) ==
          Catch::Approx(0.5).margin(1e-5));
    double max_dev = 0.0;
    for (std::size_t j = 0; j < after.size(); ++j)
        max_dev = std::max(max_dev, std::abs(after[j] - before[j]));
    CHECK(max_dev < 1e-5);
}

TEST_CASE("coherent packet means follow the classical trajectory", "[oracle]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0, false};
    const auto none = TimeFunction::zero(p.T);

    auto run = qmeter::oracle_evolve_state(
        product_state(kGrid, 1.0, 1.0 / std::sqrt(2.0), 0.0, 0.5), p, none, none, 1e-3);
    CHECK(qmeter::distribution_mean(kGrid.x, run.state.marginal_x()) ==
          Catch::Approx(std::cos(1.0)).margin(1e-6));

    // A constant external drive adds its classical response displacement.
    const auto f_D = TimeFunction::constant(p.T, 0.4);
    auto driven = qmeter::oracle_evolve_state(
        product_state(kGrid, 1.0, 1.0 / std::sqrt(2.0), 0.0, 0.5), p, none, f_D, 1e-3);
    const double response = qmeter::drive_response_F(p, f_D);
    REQUIRE(response == Catch::Approx(0.4 * (1.0 - std::cos(1.0))).margin(1e-12));
    CHECK(qmeter::distribution_mean(kGrid.x, driven.state.marginal_x()) ==
          Catch::Approx(std::cos(1.0) + response).margin(1e-6));
}

TEST_CASE("pointer record matches the solved equations of motion", "[oracle]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0, false};
    const auto f = TimeFunction::constant(p.T, 0.8);
    const auto none = TimeFunction::zero(p.T);
    const auto c = qmeter::derive_constants(p, f, none);

    auto run = qmeter::oracle_evolve_state(
        product_state(kGrid, 1.0, 1.0 / std::sqrt(2.0), 0.0, 0.5), p, f, none, 1e-3);
    const double expected =
        qmeter::pointer_final_mean(p, c, 1.0, 0.0, 0.0, 0.0, 0.8, none);
    REQUIRE(expected == Catch::Approx(0.8 * std::sin(1.0)).margin(1e-12));
    CHECK(qmeter::distribution_mean(kGrid.X, run.state.marginal_X()) ==
          Catch::Approx(expected).margin(1e-5));
    // The Hamiltonian never depends on the pointer position, so the pointer
    // momentum distribution must be exactly conserved.
    CHECK(std::abs(run.mean_P_final - run.mean_P_initial) < 1e-12);

    // With an oscillator drive added, the record gains the window-integrated
    // drive response.
    const auto f_D = TimeFunction::constant(p.T, 0.5);
    auto driven = qmeter::oracle_evolve_state(
        product_state(kGrid, 1.0, 1.0 / std::sqrt(2.0), 0.0, 0.5), p, f, f_D, 1e-3);
    const double with_drive =
        qmeter::pointer_final_mean(p, c, 1.0, 0.0, 0.0, 0.0, 0.8, f_D);
    REQUIRE(with_drive ==
            Catch::Approx(expected + 0.8 * 0.5 * (1.0 - std::sin(1.0))).margin(1e-12));
    CHECK(qmeter::distribution_mean(kGrid.X, driven.state.marginal_X()) ==
          Catch::Approx(with_drive).margin(1e-5));
}

TEST_CASE("uncoupled pointer drifts ballistically", "[oracle]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0, false};
    const auto none = TimeFunction::zero(p.T);
    auto run = qmeter::oracle_evolve_state(
        product_state(kGrid, 0.0, 1.0 / std::sqrt(2.0), 0.0, 0.5, 0.5), p, none, none,
        1e-3);
    CHECK(run.mean_P_initial == Catch::Approx(0.5).margin(1e-9));
    CHECK(std::abs(run.mean_P_final - run.mean_P_initial) < 1e-12);
    const auto c = qmeter::derive_constants(p, none, none);
    const double expected =
        qmeter::pointer_final_mean(p, c, 0.0, 0.0, 0.0, 0.5, 0.0, none);
    REQUIRE(expected == Catch::Approx(0.25).margin(1e-15));
    CHECK(qmeter::distribution_mean(kGrid.X, run.state.marginal_X()) ==
          Catch::Approx(expected).margin(1e-6));
}

TEST_CASE("step refinement converges at second order", "[oracle]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 0.5, false};
    const auto f = TimeFunction::half_sine(p.T, 0.8);
    const auto f_D = TimeFunction::gaussian_window(p.T, 0.6, 0.12, 0.2);

    auto at_dt = [&](double dt) {
        return qmeter::oracle_evolve_state(
            product_state(kGrid, 0.8, 0.7, 0.0, 0.5), p, f, f_D, dt);
    };
    const auto coarse = at_dt(4e-3);
    const auto medium = at_dt(2e-3);
    const auto fine = at_dt(1e-3);
    REQUIRE(coarse.steps == 125);
    REQUIRE(medium.steps == 250);

    const double d1 = l2_distance(coarse.state, medium.state);
    const double d2 = l2_distance(medium.state, fine.state);
    REQUIRE(d1 > 1e-9);
    const double ratio = d1 / d2;
    CHECK(ratio > 3.4);
    CHECK(ratio < 4.6);
}

TEST_CASE("steps beyond the phase bound are rejected with a usable hint",
          "[oracle]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 0.5, false};
    const auto f = TimeFunction::half_sine(p.T, 0.8);
    const auto none = TimeFunction::zero(p.T);

    bool thrown = false;
    try {
        qmeter::SplitStepper stepper(kGrid, p, f, none, 0.02);
    } catch (const qmeter::PhaseBoundError& e) {
        thrown = true;
        REQUIRE(e.suggested_dt > 0.0);
        REQUIRE(e.suggested_dt < 0.02);
        CHECK_NOTHROW(qmeter::SplitStepper(kGrid, p, f, none, e.suggested_dt));
    }
    REQUIRE(thrown);

    CHECK_THROWS_AS(qmeter::oracle_evolve_state(
                        product_state(kGrid, 0.0, 0.7, 0.0, 0.5), p, f, none, 0.02),
                    qmeter::PhaseBoundError);
}

TEST_CASE("states escaping the grid stop the run", "[oracle]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0, false};
    const auto none = TimeFunction::zero(p.T);
    // Momentum 7 swings the packet out to x ~ 7 sin(t), which reaches the
    // grid edge within the window.
    auto state = product_state(kGrid, 0.0, 1.0 / std::sqrt(2.0), 7.0, 0.5);
    CHECK_THROWS_AS(qmeter::oracle_evolve_state(std::move(state), p, none, none, 0.0),
                    qmeter::AliasingError);
}

TEST_CASE("requested steps tile the window exactly", "[oracle]") {
    const PhysicalParams p{1.0, 2.0, 1.0, 0.1, false};
    const auto none = TimeFunction::zero(p.T);

    auto run = qmeter::oracle_evolve_state(product_state(kGrid, 0.0, 0.7, 0.0, 0.5), p,
                                           none, none, 1e-3);
    CHECK(run.steps == 100);
    CHECK(run.dt == Catch::Approx(1e-3).margin(1e-18));

    // dt = 0 asks for the largest stable step within the safety margin.
    auto aut = qmeter::oracle_evolve_state(product_state(kGrid, 0.0, 0.7, 0.0, 0.5), p,
                                           none, none, 0.0);
    const double limit = qmeter::SplitStepper::max_stable_dt(kGrid, p, none, none);
    CHECK(aut.dt <= 0.8 * limit * (1.0 + 1e-12));
    CHECK(aut.dt * static_cast<double>(aut.steps) == Catch::Approx(p.T).margin(1e-15));
}
