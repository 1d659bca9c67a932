#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qmeter/qmeter.hpp"

namespace {

using qmeter::detail::g15;

// Flat key/value report rendered as JSON or two-column CSV; every number is
// formatted once so repeated runs emit identical bytes.
class Report {
public:
    void add(const std::string& key, double v) { rows_.push_back({key, g15(v), false}); }
    void add(const std::string& key, std::uint64_t v) {
        rows_.push_back({key, std::to_string(v), false});
    }
    void add(const std::string& key, bool v) {
        rows_.push_back({key, v ? "true" : "false", false});
    }
    void add(const std::string& key, const std::string& v) {
        rows_.push_back({key, v, true});
    }
    // String literals must not decay onto the bool overload.
    void add(const std::string& key, const char* v) { add(key, std::string(v)); }

    std::string json() const {
        qmeter::JsonObject o;
        for (const auto& r : rows_) {
            if (r.quoted)
                o.add(r.key, r.value);
            else
                o.add_raw(r.key, r.value);
        }
        return o.str();
    }

    std::string csv() const {
        std::string out = "key,value\n";
        for (const auto& r : rows_) out += r.key + "," + r.value + "\n";
        return out;
    }

private:
    struct Row {
        std::string key;
        std::string value;
        bool quoted;
    };
    std::vector<Row> rows_;
};

void emit(const Report& report, const std::string& out_path, const std::string& format) {
    const std::string text =
        format == "csv" ? report.csv() : report.json() + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw qmeter::IoError("cannot open file for writing: " + out_path);
    out << text;
    if (!out) throw qmeter::IoError("failed writing report to " + out_path);
}

void add_constants(Report& r, const qmeter::CouplingConstants& c) {
    r.add("B", c.B);
    r.add("A", c.A);
    r.add("B_D", c.B_D);
    r.add("A_D", c.A_D);
    r.add("C_D", c.C_D);
    r.add("g_eff", c.g_eff);
    r.add("d", c.d);
    r.add("M_eff_infinite", c.M_eff_infinite);
    if (!c.M_eff_infinite) r.add("M_eff", c.M_eff);
    r.add("phase_c1", c.phase_c1);
    r.add("phase_c0", c.phase_c0);
}

int run_couplings(const std::string& path, const std::string& out,
                  const std::string& format) {
    const qmeter::Scenario sc = qmeter::load_scenario(path);
    Report r;
    r.add("content_hash", sc.content_hash());
    add_constants(r, sc.constants());
    emit(r, out, format);
    return 0;
}

int run_transitions(const std::string& path, const std::string& out,
                    const std::string& format) {
    const qmeter::Scenario sc = qmeter::load_scenario(path);
    const qmeter::TransitionReport t =
        qmeter::transition_report_with_drive(sc.params, sc.constants(), sc.f_D);
    Report r;
    r.add("content_hash", sc.content_hash());
    r.add("p_position", t.p_position);
    r.add("p_average", t.p_average);
    r.add("path_average_factor", t.path_average_factor);
    r.add("p_pointer", t.p_pointer);
    r.add("p_sharp_pointer", t.p_sharp_pointer);
    r.add("p_sharp_pointer_free", t.p_sharp_pointer_free);
    r.add("F_D", t.F_D);
    r.add("G_D", t.G_D);
    r.add("nonphysical_regime", t.nonphysical_regime);
    emit(r, out, format);
    return 0;
}

int run_kernel(const std::string& path, const std::vector<double>& at,
               const std::string& out, const std::string& format) {
    const qmeter::Scenario sc = qmeter::load_scenario(path);
    const qmeter::cdouble v = qmeter::system_propagator(sc.params, sc.constants(),
                                                        at[0], at[1], at[2], at[3]);
    Report r;
    r.add("x", at[0]);
    r.add("X", at[1]);
    r.add("x_from", at[2]);
    r.add("X_from", at[3]);
    r.add("re", v.real());
    r.add("im", v.imag());
    r.add("modulus", std::abs(v));
    r.add("phase", std::arg(v));
    emit(r, out, format);
    return 0;
}

int run_evolve(const std::string& path, const std::string& state_out,
               const std::string& out, const std::string& format) {
    const qmeter::Scenario sc = qmeter::load_scenario(path);
    const auto t0 = std::chrono::steady_clock::now();
    const qmeter::EvolveOutcome o = qmeter::analytic_evolve(sc);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Report r;
    r.add("engine", "analytic");
    r.add("content_hash", sc.content_hash());
    r.add("grid_x_n", static_cast<std::uint64_t>(sc.grid_x.n));
    r.add("grid_X_n", static_cast<std::uint64_t>(sc.grid_X.n));
    r.add("norm_initial", o.norm_initial);
    r.add("norm_final", o.norm_final);
    r.add("wall_seconds", wall);
    if (!state_out.empty()) {
        qmeter::write_state_csv(state_out, o.state);
        r.add("state_file", state_out);
    }
    emit(r, out, format);
    return 0;
}

int run_oracle(const std::string& path, double dt, const std::string& state_out,
               const std::string& out, const std::string& format) {
    const qmeter::Scenario sc = qmeter::load_scenario(path);
    const double requested = dt >= 0.0 ? dt : sc.solver.dt;
    const auto t0 = std::chrono::steady_clock::now();
    const qmeter::OracleRun run =
        qmeter::oracle_evolve_state(sc.initial_state(), sc.params, sc.f, sc.f_D, requested);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Report r;
    r.add("engine", "oracle");
    r.add("content_hash", sc.content_hash());
    r.add("grid_x_n", static_cast<std::uint64_t>(sc.grid_x.n));
    r.add("grid_X_n", static_cast<std::uint64_t>(sc.grid_X.n));
    r.add("dt", run.dt);
    r.add("steps", static_cast<std::uint64_t>(run.steps));
    r.add("norm_initial", run.norm_initial);
    r.add("norm_final", run.norm_final);
    r.add("mean_P_initial", run.mean_P_initial);
    r.add("mean_P_final", run.mean_P_final);
    r.add("wall_seconds", wall);
    if (!state_out.empty()) {
        qmeter::write_state_csv(state_out, run.state);
        r.add("state_file", state_out);
    }
    emit(r, out, format);
    return 0;
}

int run_marginals(const std::string& path, const std::string& x_out,
                  const std::string& X_out, const std::string& out,
                  const std::string& format) {
    const qmeter::Scenario sc = qmeter::load_scenario(path);
    const bool analytic = sc.solver.engine == qmeter::SolverSpec::Engine::analytic;
    const auto t0 = std::chrono::steady_clock::now();
    qmeter::WaveFunction2D state{qmeter::Grid2D{sc.grid_x, sc.grid_X}};
    double norm_final = 0.0;
    if (analytic) {
        qmeter::EvolveOutcome o = qmeter::analytic_evolve(sc);
        state = std::move(o.state);
        norm_final = o.norm_final;
    } else {
        qmeter::OracleRun run = qmeter::oracle_evolve(sc);
        state = std::move(run.state);
        norm_final = run.norm_final;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Report r;
    r.add("engine", analytic ? "analytic" : "oracle");
    r.add("content_hash", sc.content_hash());
    r.add("norm_final", norm_final);
    r.add("wall_seconds", wall);
    if (!x_out.empty()) {
        qmeter::write_marginal_csv(x_out, sc.grid_x, state.marginal_x());
        r.add("marginal_x_file", x_out);
    }
    if (!X_out.empty()) {
        qmeter::write_marginal_csv(X_out, sc.grid_X, state.marginal_X());
        r.add("marginal_X_file", X_out);
    }
    emit(r, out, format);
    return 0;
}

int run_compare(const std::string& path_a, const std::string& path_b,
                const std::string& out, const std::string& format) {
    const qmeter::WaveFunction2D a = qmeter::load_state_csv(path_a);
    const qmeter::WaveFunction2D b = qmeter::load_state_csv(path_b);
    const qmeter::StateComparison c = qmeter::compare_states(a, b);
    Report r;
    r.add("norm_a", c.norm_a);
    r.add("norm_b", c.norm_b);
    r.add("fidelity", c.fidelity);
    r.add("l2_aligned", c.l2_aligned);
    r.add("max_pointwise", c.max_pointwise);
    emit(r, out, format);
    return 0;
}

int run_suite(const std::string& dir) {
    const auto results = qmeter::acceptance::run_all({dir});
    bool all_passed = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s (%s)\n", r.passed ? "PASS" : "FAIL", r.index,
                    r.name.c_str(), r.detail.c_str());
        all_passed = all_passed && r.passed;
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-body position measurement simulator"};
    app.set_version_flag("--version", qmeter::kVersion);
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "json";
    unsigned threads = 0;
    app.add_option("--out", out_path, "write the report to FILE instead of stdout");
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", threads, "cap worker threads (0 = hardware limit)");

    std::string scenario_path;
    auto scenario_opt = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    };

    auto* couplings =
        app.add_subcommand("couplings", "derived coupling constants of a scenario");
    scenario_opt(couplings);

    auto* transitions =
        app.add_subcommand("transitions", "window transition densities and drive response");
    scenario_opt(transitions);

    auto* kernel =
        app.add_subcommand("kernel", "two-body propagator element at given endpoints");
    scenario_opt(kernel);
    std::vector<double> at;
    kernel->add_option("--at", at, "evaluation point: x X x_from X_from")
        ->expected(4)
        ->required();

    auto* evolve = app.add_subcommand("evolve", "closed-form evolution of a scenario");
    scenario_opt(evolve);
    std::string state_out;
    evolve->add_option("--state-out", state_out, "write the final state as CSV");

    auto* oracle = app.add_subcommand("oracle", "split-operator evolution of a scenario");
    scenario_opt(oracle);
    double dt = -1.0;
    oracle->add_option("--dt", dt, "override the scenario step (0 = automatic)");
    oracle->add_option("--state-out", state_out, "write the final state as CSV");

    auto* marginals =
        app.add_subcommand("marginals", "final-state marginals via the configured engine");
    scenario_opt(marginals);
    std::string x_out, X_out;
    marginals->add_option("--x-out", x_out, "write the position marginal as CSV");
    marginals->add_option("--X-out", X_out, "write the pointer marginal as CSV");

    auto* compare = app.add_subcommand("compare", "compare two state CSV files");
    std::string path_a, path_b;
    compare->add_option("--a", path_a, "first state file")->required();
    compare->add_option("--b", path_b, "second state file")->required();

    auto* suite = app.add_subcommand("suite", "run the full acceptance suite");
    std::string scenario_dir = "scenarios";
    suite->add_option("--scenarios", scenario_dir, "scenario directory");

    // Global options (--out, --format, --threads) stay valid after the
    // subcommand name.
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (threads > 0) qmeter::set_max_threads(threads);
        if (couplings->parsed()) return run_couplings(scenario_path, out_path, format);
        if (transitions->parsed()) return run_transitions(scenario_path, out_path, format);
        if (kernel->parsed()) return run_kernel(scenario_path, at, out_path, format);
        if (evolve->parsed()) return run_evolve(scenario_path, state_out, out_path, format);
        if (oracle->parsed())
            return run_oracle(scenario_path, dt, state_out, out_path, format);
        if (marginals->parsed())
            return run_marginals(scenario_path, x_out, X_out, out_path, format);
        if (compare->parsed()) return run_compare(path_a, path_b, out_path, format);
        if (suite->parsed()) return run_suite(scenario_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
