#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qmeter/scenario.hpp"

namespace qmeter {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw SchemaError(what + ": cannot parse number from '" + text + "'");
    return v;
}

inline long parse_int(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw SchemaError(what + ": cannot parse integer from '" + text + "'");
    return v;
}

// One parsed section: ordered key/value pairs with consumption tracking, so
// unknown keys are reported after the known ones are read.
class Section {
public:
    explicit Section(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }

    void insert(const std::string& key, const std::string& value) {
        if (values_.count(key))
            throw SchemaError("duplicate key '" + key + "' in [" + name_ + "]");
        values_.emplace(key, value);
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string take(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end())
            throw SchemaError("missing key '" + key + "' in [" + name_ + "]");
        consumed_.insert(it->first);
        return it->second;
    }

    std::string take_or(const std::string& key, const std::string& fallback) {
        return has(key) ? take(key) : fallback;
    }

    double take_double(const std::string& key) {
        return parse_double(take(key), "[" + name_ + "] " + key);
    }

    double take_double_or(const std::string& key, double fallback) {
        return has(key) ? take_double(key) : fallback;
    }

    long take_int_or(const std::string& key, long fallback) {
        return has(key) ? parse_int(take(key), "[" + name_ + "] " + key) : fallback;
    }

    void finish() const {
        for (const auto& [key, value] : values_)
            if (!consumed_.count(key))
                throw SchemaError("unknown key '" + key + "' in [" + name_ + "]");
    }

private:
    std::string name_;
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

inline TimeFunction profile_from_section(Section& s, double T) {
    const std::string family = s.take("family");
    if (family == "zero") return TimeFunction::zero(T);
    if (family == "constant") return TimeFunction::constant(T, s.take_double("amplitude"));
    if (family == "half_sine") return TimeFunction::half_sine(T, s.take_double("amplitude"));
    if (family == "raised_cosine")
        return TimeFunction::raised_cosine(T, s.take_double("amplitude"));
    if (family == "gaussian_window") {
        const double amplitude = s.take_double("amplitude");
        const double width = s.take_double("width");
        if (s.has("center"))
            return TimeFunction::gaussian_window(T, amplitude, width, s.take_double("center"));
        return TimeFunction::gaussian_window(T, amplitude, width);
    }
    if (family == "tabulated") {
        std::istringstream in(s.take("samples"));
        std::vector<double> samples;
        std::string token;
        while (in >> token)
            samples.push_back(parse_double(token, "[" + s.name() + "] samples"));
        return TimeFunction::tabulated(T, std::move(samples));
    }
    throw SchemaError("unknown profile family '" + family + "' in [" + s.name() + "]");
}

inline void profile_to_stream(std::ostream& out, const std::string& section,
                              const TimeFunction& f) {
    out << '[' << section << "]\n";
    switch (f.family()) {
        case TimeFunction::Family::zero:
            out << "family = zero\n";
            break;
        case TimeFunction::Family::constant:
            out << "family = constant\n";
            out << "amplitude = " << format_double(f.amplitude()) << '\n';
            break;
        case TimeFunction::Family::half_sine:
            out << "family = half_sine\n";
            out << "amplitude = " << format_double(f.amplitude()) << '\n';
            break;
        case TimeFunction::Family::raised_cosine:
            out << "family = raised_cosine\n";
            out << "amplitude = " << format_double(f.amplitude()) << '\n';
            break;
        case TimeFunction::Family::gaussian_window:
            out << "family = gaussian_window\n";
            out << "amplitude = " << format_double(f.amplitude()) << '\n';
            out << "width = " << format_double(f.width()) << '\n';
            out << "center = " << format_double(f.center()) << '\n';
            break;
        case TimeFunction::Family::tabulated: {
            out << "family = tabulated\n";
            out << "samples =";
            for (double v : f.samples()) out << ' ' << format_double(v);
            out << '\n';
            break;
        }
    }
    out << '\n';
}

inline Grid1D grid_from_section(Section& s, const Grid1D& fallback) {
    Grid1D g = fallback;
    g.min = s.take_double_or("min", fallback.min);
    g.max = s.take_double_or("max", fallback.max);
    const long n = s.take_int_or("n", static_cast<long>(fallback.n));
    if (n <= 0) throw SchemaError("[" + s.name() + "] n must be positive");
    g.n = static_cast<std::size_t>(n);
    return g;
}

}  // namespace detail

// Parses the sectioned key = value scenario format. Unknown sections, unknown
// keys, duplicates and malformed numbers all raise SchemaError with the
// offending name. The result is validated before it is returned.
inline Scenario parse_scenario_text(const std::string& text) {
    std::vector<detail::Section> sections;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SchemaError("line " + std::to_string(line_no) + ": unterminated section header");
            const std::string name = detail::trim(line.substr(1, line.size() - 2));
            for (const auto& s : sections)
                if (s.name() == name)
                    throw SchemaError("duplicate section [" + name + "]");
            sections.emplace_back(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaError("line " + std::to_string(line_no) + ": expected 'key = value'");
        if (sections.empty())
            throw SchemaError("line " + std::to_string(line_no) + ": key outside any section");
        sections.back().insert(detail::trim(line.substr(0, eq)),
                               detail::trim(line.substr(eq + 1)));
    }

    auto find = [&](const std::string& name) -> detail::Section* {
        for (auto& s : sections)
            if (s.name() == name) return &s;
        return nullptr;
    };

    detail::Section* sp = find("params");
    if (!sp) throw SchemaError("missing required section [params]");
    Scenario sc;
    sc.params.m = sp->take_double("m");
    const std::string mass = sp->take("M");
    if (mass == "inf" || mass == "infinity") {
        sc.params.pointer_mass_infinite = true;
        sc.params.M = 0.0;
    } else {
        sc.params.M = detail::parse_double(mass, "[params] M");
    }
    sc.params.omega = sp->take_double("omega");
    sc.params.T = sp->take_double("T");
    sc.params.validate();

    if (auto* s = find("coupling"))
        sc.f = detail::profile_from_section(*s, sc.params.T);
    else
        sc.f = TimeFunction::zero(sc.params.T);
    if (auto* s = find("drive"))
        sc.f_D = detail::profile_from_section(*s, sc.params.T);
    else
        sc.f_D = TimeFunction::zero(sc.params.T);

    if (auto* s = find("oscillator_state")) {
        const std::string kind = s->take_or("kind", "gaussian");
        if (kind == "gaussian") {
            sc.oscillator.kind = OscillatorStateSpec::Kind::gaussian;
            sc.oscillator.center = s->take_double_or("center", 0.0);
            sc.oscillator.sigma = s->take_double_or("sigma", 1.0);
            sc.oscillator.momentum = s->take_double_or("momentum", 0.0);
        } else if (kind == "quasi_delta") {
            sc.oscillator.kind = OscillatorStateSpec::Kind::quasi_delta;
            sc.oscillator.center = s->take_double_or("center", 0.0);
        } else {
            throw SchemaError("unknown oscillator_state kind '" + kind + "'");
        }
    }
    if (auto* s = find("pointer_state")) {
        const std::string kind = s->take_or("kind", "gaussian");
        if (kind == "gaussian") {
            sc.pointer.kind = PointerStateSpec::Kind::gaussian;
            sc.pointer.sigma = s->take_double_or("sigma", 1.0);
        } else if (kind == "quasi_delta") {
            sc.pointer.kind = PointerStateSpec::Kind::quasi_delta;
        } else {
            throw SchemaError("unknown pointer_state kind '" + kind + "'");
        }
    }
    if (auto* s = find("grid_x")) sc.grid_x = detail::grid_from_section(*s, sc.grid_x);
    if (auto* s = find("grid_X")) sc.grid_X = detail::grid_from_section(*s, sc.grid_X);
    if (auto* s = find("solver")) {
        const std::string engine = s->take_or("engine", "analytic");
        if (engine == "analytic")
            sc.solver.engine = SolverSpec::Engine::analytic;
        else if (engine == "oracle")
            sc.solver.engine = SolverSpec::Engine::oracle;
        else
            throw SchemaError("unknown solver engine '" + engine + "'");
        sc.solver.dt = s->take_double_or("dt", 0.0);
        sc.solver.splitting_order = static_cast<int>(s->take_int_or("splitting_order", 2));
    }

    static const char* known[] = {"params",          "coupling",      "drive",
                                  "oscillator_state", "pointer_state", "grid_x",
                                  "grid_X",           "solver"};
    for (auto& s : sections) {
        bool ok = false;
        for (const char* name : known) ok = ok || s.name() == name;
        if (!ok) throw SchemaError("unknown section [" + s.name() + "]");
        s.finish();
    }

    sc.validate();
    return sc;
}

// Serializes every section explicitly with round-trip precision: parsing the
// output reproduces the scenario bit for bit.
inline std::string scenario_to_text(const Scenario& sc) {
    std::ostringstream out;
    out << "[params]\n";
    out << "m = " << detail::format_double(sc.params.m) << '\n';
    if (sc.params.pointer_mass_infinite)
        out << "M = inf\n";
    else
        out << "M = " << detail::format_double(sc.params.M) << '\n';
    out << "omega = " << detail::format_double(sc.params.omega) << '\n';
    out << "T = " << detail::format_double(sc.params.T) << "\n\n";

    detail::profile_to_stream(out, "coupling", sc.f);
    detail::profile_to_stream(out, "drive", sc.f_D);

    out << "[oscillator_state]\n";
    if (sc.oscillator.kind == OscillatorStateSpec::Kind::gaussian) {
        out << "kind = gaussian\n";
        out << "center = " << detail::format_double(sc.oscillator.center) << '\n';
        out << "sigma = " << detail::format_double(sc.oscillator.sigma) << '\n';
        out << "momentum = " << detail::format_double(sc.oscillator.momentum) << "\n\n";
    } else {
        out << "kind = quasi_delta\n";
        out << "center = " << detail::format_double(sc.oscillator.center) << "\n\n";
    }

    out << "[pointer_state]\n";
    if (sc.pointer.kind == PointerStateSpec::Kind::gaussian) {
        out << "kind = gaussian\n";
        out << "sigma = " << detail::format_double(sc.pointer.sigma) << "\n\n";
    } else {
        out << "kind = quasi_delta\n\n";
    }

    out << "[grid_x]\n";
    out << "min = " << detail::format_double(sc.grid_x.min) << '\n';
    out << "max = " << detail::format_double(sc.grid_x.max) << '\n';
    out << "n = " << sc.grid_x.n << "\n\n";
    out << "[grid_X]\n";
    out << "min = " << detail::format_double(sc.grid_X.min) << '\n';
    out << "max = " << detail::format_double(sc.grid_X.max) << '\n';
    out << "n = " << sc.grid_X.n << "\n\n";

    out << "[solver]\n";
    out << "engine = "
        << (sc.solver.engine == SolverSpec::Engine::analytic ? "analytic" : "oracle") << '\n';
    out << "dt = " << detail::format_double(sc.solver.dt) << '\n';
    out << "splitting_order = " << sc.solver.splitting_order << '\n';
    return out.str();
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario_text(buf.str());
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << scenario_to_text(sc);
    if (!out) throw IoError("failed writing scenario to " + path);
}

}
