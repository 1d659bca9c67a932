#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "qmeter/grid.hpp"
#include "qmeter/quadrature.hpp"
#include "qmeter/time_function.hpp"

namespace {

// Composite Simpson oracle, deliberately naive: fixed dense sampling,
// no adaptivity shared with the code under test.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double simpson_triangle(const std::function<double(double, double)>& f, double T,
                        int n) {
    return simpson([&](double t) {
        if (t <= 0.0) return 0.0;
        return simpson([&](double s) { return f(t, s); }, 0.0, t, n);
    }, 0.0, T, n);
}

}  // namespace

TEST_CASE("adaptive panels reproduce closed forms", "[quadrature]") {
    const double two = qmeter::integrate([](double t) { return std::sin(t); }, 0.0,
                                         qmeter::kPi, 1e-12);
    CHECK(two == Catch::Approx(2.0).epsilon(1e-13));

    // integral of t e^t over [0,1] is (t-1)e^t evaluated at the ends.
    const double one = qmeter::integrate([](double t) { return t * std::exp(t); },
                                         0.0, 1.0, 1e-12);
    CHECK(one == Catch::Approx(1.0).epsilon(1e-13));

    CHECK(qmeter::integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-12) == 0.0);
}

TEST_CASE("adaptive result matches a dense Simpson oracle", "[quadrature]") {
    auto f = [](double t) { return std::sin(7.0 * t) * std::exp(-t / 3.0); };
    const double oracle = simpson(f, 0.0, 5.0, 200000);
    const double value = qmeter::integrate(f, 0.0, 5.0, 1e-11);
    CHECK(value == Catch::Approx(oracle).margin(1e-9));
}

TEST_CASE("tabulated kinks integrate exactly with knot breakpoints", "[quadrature]") {
    const auto f = qmeter::TimeFunction::tabulated(1.0, {0.0, 1.0, 0.25, 0.0});
    // Piecewise-linear segments integrate to trapezoid areas.
    const double exact = (0.5 + 0.625 + 0.125) / 3.0;

    qmeter::QuadratureOptions opts;
    opts.breakpoints = f.knots();
    const double with_knots =
        qmeter::integrate([&](double t) { return f(t); }, 0.0, 1.0, 1e-13, opts);
    CHECK(with_knots == Catch::Approx(exact).epsilon(1e-14));

    const double without =
        qmeter::integrate([&](double t) { return f(t); }, 0.0, 1.0, 1e-10);
    CHECK(without == Catch::Approx(exact).margin(1e-9));
}

TEST_CASE("triangle integration matches closed forms and Simpson", "[quadrature]") {
    const double half = qmeter::integrate_triangle(
        [](double, double) { return 1.0; }, 2.0, 1e-12);
    CHECK(half == Catch::Approx(2.0).epsilon(1e-12));

    const double eighth = qmeter::integrate_triangle(
        [](double t, double s) { return t * s; }, 1.0, 1e-12);
    CHECK(eighth == Catch::Approx(0.125).epsilon(1e-11));

    // sin(t) cos(s) over the triangle: inner integral sin(t)^2, giving
    // T/2 - sin(2T)/4 at the outer level.
    const double osc = qmeter::integrate_triangle(
        [](double t, double s) { return std::sin(t) * std::cos(s); }, 2.0, 1e-12);
    CHECK(osc == Catch::Approx(1.0 - std::sin(4.0) / 4.0).epsilon(1e-11));

    // The exact shape the coupling integrals use.
    const double omega = 1.0, T = 1.0;
    auto coupling = [&](double t, double s) {
        return std::sin(qmeter::kPi * t) * std::sin(qmeter::kPi * s) *
               std::sin(omega * (T - t)) * std::sin(omega * s);
    };
    const double oracle = simpson_triangle(coupling, T, 2000);
    const double value = qmeter::integrate_triangle(coupling, T, 1e-12);
    CHECK(value == Catch::Approx(oracle).margin(1e-9));
}

TEST_CASE("stalled refinement reports the achieved tolerance", "[quadrature]") {
    qmeter::QuadratureOptions opts;
    opts.max_depth = 3;
    auto rough = [](double t) { return std::sqrt(std::abs(t - 1.0 / qmeter::kPi)); };
    try {
        qmeter::integrate(rough, 0.0, 1.0, 1e-15, opts);
        FAIL("expected QuadratureError");
    } catch (const qmeter::QuadratureError& e) {
        CHECK(e.achieved_tolerance > 1e-15);
        CHECK(std::string(e.what()).find("requested") != std::string::npos);
    }
}
