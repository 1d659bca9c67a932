#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qmeter/errors.hpp"

namespace qmeter {

// Adaptive bisection on 7/15 Gauss-Kronrod panels with an absolute
// tolerance target. Smooth integrands converge in a handful of panels;
// kinks are isolated by the bisection (callers may also pass breakpoints
// so panel edges land on known kinks).

namespace detail {

// Kronrod abscissae for [-1, 1] (positive half) and the paired weights.
inline constexpr double kGkNodes[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
// Gauss weights belong to every second Kronrod node (indices 1,3,5,7).
inline constexpr double kGaussWeights[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct PanelResult {
    double value;
    double error;
};

template <typename Fn>
PanelResult gk15(const Fn& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double offset = half * kGkNodes[i];
        double fsum;
        if (i == 7) {
            fsum = f(mid);
        } else {
            fsum = f(mid - offset) + f(mid + offset);
        }
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

template <typename Fn>
void gk_adaptive(const Fn& f, double a, double b, double tol, int depth,
                 int max_depth, double& value, double& err_accum) {
    PanelResult p = gk15(f, a, b);
    if (p.error <= tol || depth >= max_depth) {
        value += p.value;
        err_accum += p.error;
        return;
    }
    const double mid = 0.5 * (a + b);
    gk_adaptive(f, a, mid, 0.5 * tol, depth + 1, max_depth, value, err_accum);
    gk_adaptive(f, mid, b, 0.5 * tol, depth + 1, max_depth, value, err_accum);
}

}  // namespace detail

struct QuadratureOptions {
    int max_depth = 48;
    // Interior points forced onto panel edges (e.g. tabulated-profile knots).
    std::vector<double> breakpoints{};
};

template <typename Fn>
double integrate(const Fn& f, double a, double b, double abs_tol,
                 const QuadratureOptions& opts = {}) {
    if (!(b > a)) return 0.0;
    std::vector<double> edges{a};
    for (double x : opts.breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    const double span = b - a;
    double value = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i];
        const double hi = edges[i + 1];
        if (hi - lo <= 0.0) continue;
        const double seg_tol = std::max(abs_tol * (hi - lo) / span, abs_tol * 1e-3);
        detail::gk_adaptive(f, lo, hi, seg_tol, 0, opts.max_depth, value, err);
    }
    if (err > abs_tol)
        throw QuadratureError(
            "adaptive integration stalled at estimate " + std::to_string(err) +
                " (requested " + std::to_string(abs_tol) + ")",
            err);
    return value;
}

// Integral of f(t, s) over the triangle 0 <= s <= t <= T. The inner
// integral is resolved tightly enough that its error, accumulated over the
// outer sweep, stays inside the overall budget.
template <typename Fn2>
double integrate_triangle(const Fn2& f, double T, double abs_tol,
                          const QuadratureOptions& opts = {}) {
    if (!(T > 0.0)) return 0.0;
    const double inner_tol = 0.25 * abs_tol / std::max(T, 1.0);
    QuadratureOptions inner_opts = opts;
    auto outer = [&](double t) {
        inner_opts.breakpoints = opts.breakpoints;
        return integrate([&](double s) { return f(t, s); }, 0.0, t, inner_tol,
                         inner_opts);
    };
    return integrate(outer, 0.0, T, 0.5 * abs_tol, opts);
}

}
