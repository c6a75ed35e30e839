// Command-line front end: solve, sweep, converge, oracle, reproduce.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "superexp/config.hpp"
#include "superexp/error.hpp"
#include "superexp/oracles.hpp"
#include "superexp/pipeline.hpp"

namespace fs = std::filesystem;
using namespace superexp;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2, kIo = 3 };

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

unsigned env_workers() {
    const char* v = std::getenv("SUPEREXP_WORKERS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError(std::string("SUPEREXP_WORKERS must be a positive integer, got '") + v + "'");
    return static_cast<unsigned>(n);
}

fs::path output_dir(const std::string& flag, const std::string& fallback) {
    if (!flag.empty()) return flag;
    if (const char* v = std::getenv("SUPEREXP_OUTPUT_DIR"); v && *v) return v;
    return fallback;
}

void report(const RunResults& r, std::ostream& log) {
    for (const std::string& n : r.notes) log << "note: " << n << '\n';
    if (r.sweep) {
        log << "sweep over " << r.sweep->parameter << ": " << r.sweep->points.size() << " points, "
            << r.sweep->failures << " failed, grid n=" << r.sweep->grid.n_points << '\n';
        return;
    }
    if (!r.solution) return;
    const auto& sol = *r.solution;
    log << family_name(sol.spec.family) << ": " << sol.spectrum.size() << " states on [" << format_double(sol.grid.q_min)
        << ", " << format_double(sol.grid.q_max) << "] with n=" << sol.grid.n_points
        << " h=" << format_double(sol.grid.h) << '\n';
    log << "E_1 = " << format_double(sol.spectrum.energies.front())
        << "  E_M = " << format_double(sol.spectrum.energies.back()) << '\n';
    if (r.fit) {
        log << "power law fit on [" << r.fit->n_lo << ", " << r.fit->n_hi << "]: p = " << format_double(r.fit->exponent);
        if (r.fit->n_hi - r.fit->n_lo >= 10) {
            try {
                const auto [down, up] = fit_sensitivity(sol.spectrum.energies, r.fit->n_lo, r.fit->n_hi);
                log << " (window shifted -20/+20: " << format_double(down) << " / " << format_double(up) << ")";
            } catch (const std::exception&) {
            }
        }
        log << '\n';
    }
    if (r.doublets) {
        log << r.doublets->doublets.size() << " doublets, " << r.doublets->rejected.size()
            << " near-degenerate non-doublets\n";
    }
}

int run_and_emit(const RunConfig& config, const fs::path& dir, unsigned workers) {
    const RunResults r = run_config(config, workers);
    report(r, std::cerr);
    emit_outputs(r, dir);
    std::ofstream cfg(dir / "config.ini", std::ios::binary | std::ios::trunc);
    RunConfig written = config;
    written.output.directory = dir.generic_string();
    cfg << emit_config(written);
    if (!cfg) throw IoError("failed writing " + (dir / "config.ini").string());
    std::cerr << "wrote " << dir.string() << '\n';
    return kOk;
}

int oracle(const std::string& which, std::size_t states, double h) {
    if (which == "harmonic") {
        const double half = 20.0;
        const auto n = static_cast<std::size_t>(std::llround(2.0 * half / h)) + 1;
        const Grid g = make_grid(-half, half, n);
        const Spectrum s = solve_lowest(assemble_hamiltonian(g, [](double q) { return 0.5 * q * q; }), states, false);
        const auto exact = analytic_energies(AnalyticCase::HarmonicOscillator, states);
        double worst = 0.0;
        std::cout << "n,E,exact,abs_error\n";
        for (std::size_t j = 0; j < states; ++j) {
            const double err = std::abs(s.energies[j] - exact[j]);
            worst = std::max(worst, err);
            std::cout << j + 1 << ',' << format_double(s.energies[j]) << ',' << format_double(exact[j]) << ','
                      << format_double(err) << '\n';
        }
        std::cerr << "harmonic oscillator on [-20, 20], h = " << format_double(g.h)
                  << ": max abs error " << format_double(worst) << '\n';
        return kOk;
    }
    if (which == "box") {
        const double width = 3.141592653589793;
        const auto cells = static_cast<std::size_t>(std::llround(width / h));
        const double step = width / static_cast<double>(cells);
        const Grid g = make_grid(step, width - step, cells - 1);
        const Spectrum s = solve_lowest(
            assemble_hamiltonian(g, [](double) { return 0.0; }, Closure::OddReflection), states, false);
        const auto exact = analytic_energies(AnalyticCase::InfiniteWell, states, width);
        double worst = 0.0;
        std::cout << "n,E,exact,rel_error\n";
        for (std::size_t j = 0; j < states; ++j) {
            const double err = std::abs(s.energies[j] - exact[j]) / exact[j];
            worst = std::max(worst, err);
            std::cout << j + 1 << ',' << format_double(s.energies[j]) << ',' << format_double(exact[j]) << ','
                      << format_double(err) << '\n';
        }
        std::cerr << "infinite well on [0, pi], h = " << format_double(step) << ": max rel error "
                  << format_double(worst) << '\n';
        return kOk;
    }
    throw ConfigError("oracle case must be 'harmonic' or 'box', got '" + which + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound states and spectral analysis of superexponential and oscillating power potentials"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    std::size_t states_override = 0;

    auto* solve = app.add_subcommand("solve", "Solve one configuration and write CSV outputs");
    solve->add_option("-c,--config", config_path, "Configuration file")->required();
    solve->add_option("-o,--out", out_flag, "Output directory (overrides config and SUPEREXP_OUTPUT_DIR)");
    solve->add_option("-m,--states", states_override, "Number of states (overrides [solve] states)");

    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    std::size_t points = 0;
    auto* sweep = app.add_subcommand("sweep", "Sweep one potential parameter on a shared grid");
    sweep->add_option("-c,--config", config_path, "Configuration file")->required();
    sweep->add_option("-o,--out", out_flag, "Output directory");
    sweep->add_option("-p,--parameter", parameter, "alpha, beta, k, phi or gamma");
    sweep->add_option("--from", from, "First value");
    sweep->add_option("--to", to, "Last value");
    sweep->add_option("-n,--points", points, "Number of values");

    std::vector<double> h_list;
    auto* converge = app.add_subcommand("converge", "Grid refinement study on a fixed domain");
    converge->add_option("-c,--config", config_path, "Configuration file")->required();
    converge->add_option("-o,--out", out_flag, "Output directory");
    converge->add_option("--spacings", h_list, "Grid spacings, strictly decreasing")->required()->delimiter(',');

    std::string oracle_case = "harmonic";
    std::size_t oracle_states = 100;
    double oracle_h = 0.01;
    auto* orc = app.add_subcommand("oracle", "Compare the solver with closed-form spectra (CSV to stdout)");
    orc->add_option("case", oracle_case, "harmonic or box")->check(CLI::IsMember({"harmonic", "box"}));
    orc->add_option("-m,--states", oracle_states, "Number of states");
    orc->add_option("--spacing", oracle_h, "Grid spacing");

    std::vector<std::string> figures;
    auto* repro = app.add_subcommand("reproduce", "Run the canned figure configurations");
    repro->add_option("figure", figures, "fig1 .. fig12, or all")->required();
    repro->add_option("-o,--out", out_flag, "Base output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        const unsigned workers = env_workers();
        if (*solve) {
            RunConfig c = load_config(config_path);
            if (states_override > 0) c.solve.states = states_override;
            c.sweep.reset();
            return run_and_emit(c, output_dir(out_flag, c.output.directory), workers);
        }
        if (*sweep) {
            RunConfig c = load_config(config_path);
            SweepConfig s = c.sweep.value_or(SweepConfig{});
            if (!parameter.empty()) s.parameter = parameter;
            if (sweep->count("--from")) s.from = from;
            if (sweep->count("--to")) s.to = to;
            if (points > 0) s.points = points;
            c.sweep = s;
            return run_and_emit(c, output_dir(out_flag, c.output.directory), workers);
        }
        if (*converge) {
            const RunConfig c = load_config(config_path);
            double q_min = c.grid.q_min;
            double q_max = c.grid.q_max;
            if (!c.grid.explicit_grid) {
                const Grid g = solve_potential(c.potential, solve_settings(c)).grid;
                q_min = g.q_min;
                q_max = g.q_max;
            }
            const ConvergenceTable t = convergence_study(c.potential, q_min, q_max, c.solve.states, h_list);
            const fs::path dir = output_dir(out_flag, c.output.directory);
            fs::create_directories(dir);
            write_convergence_csv(t, dir / "convergence.csv");
            std::cerr << "fitted order: " << (t.fitted_order ? format_double(*t.fitted_order) : "n/a") << '\n';
            return kOk;
        }
        if (*orc) return oracle(oracle_case, oracle_states, oracle_h);
        if (*repro) {
            std::vector<std::string> ids = figures;
            if (ids.size() == 1 && ids.front() == "all") ids = figure_ids();
            const fs::path base = output_dir(out_flag, "reproduce");
            for (const std::string& id : ids) {
                for (const FigureRun& run : figure_runs(id)) {
                    std::cerr << "== " << id << " / " << run.name << '\n';
                    run_and_emit(run.config, base / id / run.name, workers);
                }
            }
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kSolver;
    }
    return kOk;
}
