#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qmeter/wavefunction.hpp"

namespace qmeter {

namespace detail {

// All exported numbers go through one formatter so repeated runs produce
// byte-identical artifacts.
inline std::string g15(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// Insertion-ordered flat JSON object writer; enough for run records and
// reports, with deterministic formatting.
class JsonObject {
public:
    void add(const std::string& key, double v) { push(key, detail::g15(v)); }
    void add(const std::string& key, const std::string& v) {
        push(key, "\"" + detail::json_escape(v) + "\"");
    }
    void add(const std::string& key, const char* v) { add(key, std::string(v)); }
    void add(const std::string& key, bool v) { push(key, v ? "true" : "false"); }
    void add(const std::string& key, std::uint64_t v) { push(key, std::to_string(v)); }
    void add_raw(const std::string& key, const std::string& raw) { push(key, raw); }
    void add(const std::string& key, const JsonObject& nested) { push(key, nested.str()); }

    std::string str() const {
        std::string out = "{";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) out += ",";
            out += parts_[i];
        }
        out += "}";
        return out;
    }

private:
    void push(const std::string& key, const std::string& rendered) {
        parts_.push_back("\"" + detail::json_escape(key) + "\":" + rendered);
    }
    std::vector<std::string> parts_;
};

// State files are (x, X, re, im) rows with the pointer coordinate varying
// fastest, one header line, 15 significant digits.
inline void write_state_csv(std::ostream& out, const WaveFunction2D& state) {
    out << "x,X,re,im\n";
    for (std::size_t i = 0; i < state.grid.x.n; ++i) {
        const double x = state.grid.x.point(i);
        const std::string xs = detail::g15(x);
        for (std::size_t k = 0; k < state.grid.X.n; ++k) {
            const cdouble v = state.at(i, k);
            out << xs << ',' << detail::g15(state.grid.X.point(k)) << ','
                << detail::g15(v.real()) << ',' << detail::g15(v.imag()) << '\n';
        }
    }
}

inline void write_state_csv(const std::string& path, const WaveFunction2D& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    write_state_csv(out, state);
    if (!out) throw IoError("failed writing state to " + path);
}

// Marginal files are (coordinate, probability) rows.
inline void write_marginal_csv(std::ostream& out, const Grid1D& grid,
                               const std::vector<double>& p) {
    out << "coordinate,probability\n";
    for (std::size_t j = 0; j < grid.n; ++j)
        out << detail::g15(grid.point(j)) << ',' << detail::g15(p[j]) << '\n';
}

inline void write_marginal_csv(const std::string& path, const Grid1D& grid,
                               const std::vector<double>& p) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    write_marginal_csv(out, grid, p);
    if (!out) throw IoError("failed writing marginal to " + path);
}

namespace detail {

// Rebuilds a uniform power-of-two grid from the coordinates seen in a state
// file; the right endpoint is one spacing past the last point.
inline Grid1D grid_from_points(const std::vector<double>& pts, const char* name) {
    if (pts.size() < 2) throw SchemaError(std::string(name) + ": too few grid points");
    const double spacing = pts[1] - pts[0];
    if (!(spacing > 0.0)) throw SchemaError(std::string(name) + ": coordinates not increasing");
    for (std::size_t j = 1; j < pts.size(); ++j) {
        const double d = pts[j] - pts[j - 1];
        if (std::abs(d - spacing) > 1e-9 * spacing)
            throw SchemaError(std::string(name) + ": coordinates not uniformly spaced");
    }
    Grid1D g;
    g.min = pts.front();
    g.max = pts.back() + spacing;
    g.n = pts.size();
    g.validate(name);
    return g;
}

}  // namespace detail

// Loads a state CSV written by write_state_csv (or anything matching its
// layout: header, X fastest, complete rectangular grid).
inline WaveFunction2D load_state_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open state file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,X,re,im", 0) != 0)
        throw SchemaError(path + ": expected header 'x,X,re,im'");

    std::vector<double> xs, Xs;
    std::vector<cdouble> values;
    std::vector<double> first_x_block;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, X, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &X, &re, &im) != 4)
            throw SchemaError(path + ": malformed row '" + line + "'");
        if (xs.empty() || x != xs.back()) xs.push_back(x);
        if (xs.size() == 1) first_x_block.push_back(X);
        values.emplace_back(re, im);
    }
    const Grid1D gx = detail::grid_from_points(xs, "grid_x");
    const Grid1D gX = detail::grid_from_points(first_x_block, "grid_X");
    if (values.size() != gx.n * gX.n)
        throw SchemaError(path + ": row count does not form a full grid");

    WaveFunction2D state(Grid2D{gx, gX});
    state.data = std::move(values);
    return state;
}

// How close two states are, up to the physically meaningless global phase.
struct StateComparison {
    double norm_a = 0.0;
    double norm_b = 0.0;
    double fidelity = 0.0;       // |<a|b>| / (|a| |b|)
    double l2_aligned = 0.0;     // min over phases of |c a - b| / |b|
    double max_pointwise = 0.0;  // sup |c a - b| at the optimal phase
};

inline StateComparison compare_states(const WaveFunction2D& a, const WaveFunction2D& b) {
    if (!(a.grid == b.grid))
        throw SchemaError("cannot compare states on different grids");
    cdouble inner(0.0, 0.0);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        inner += std::conj(a.data[i]) * b.data[i];
    inner *= a.grid.cell();

    StateComparison r;
    r.norm_a = a.norm();
    r.norm_b = b.norm();
    r.fidelity = std::abs(inner) / (r.norm_a * r.norm_b);
    const double l2sq =
        r.norm_a * r.norm_a + r.norm_b * r.norm_b - 2.0 * std::abs(inner);
    r.l2_aligned = std::sqrt(std::max(0.0, l2sq)) / r.norm_b;

    const cdouble phase =
        std::abs(inner) > 0.0 ? inner / std::abs(inner) : cdouble(1.0, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        worst = std::max(worst, std::abs(phase * a.data[i] - b.data[i]));
    r.max_pointwise = worst;
    return r;
}

inline JsonObject comparison_json(const StateComparison& c) {
    JsonObject o;
    o.add("norm_a", c.norm_a);
    o.add("norm_b", c.norm_b);
    o.add("fidelity", c.fidelity);
    o.add("l2_aligned", c.l2_aligned);
    o.add("max_pointwise", c.max_pointwise);
    return o;
}

}
