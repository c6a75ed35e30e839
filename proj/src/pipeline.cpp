#include "superexp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "superexp/error.hpp"

namespace superexp {
namespace {

void write_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing " + file.string());
}

std::size_t well_resolution(const PotentialSpec& spec, const Grid& grid) {
    std::size_t r = 20000;
    if (is_opp(spec.family)) {
        const double periods = (grid.q_max - grid.q_min) * spec.k / (2.0 * std::numbers::pi);
        r = std::max(r, static_cast<std::size_t>(256.0 * periods));
    }
    return r;
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "nan"; }

}  // namespace

SolveSettings solve_settings(const RunConfig& c) {
    SolveSettings s;
    s.states = c.solve.states;
    s.policy.pad = c.grid.pad;
    s.policy.points_per_wavelength = c.grid.points_per_wavelength;
    if (c.grid.explicit_grid) s.grid = make_grid(c.grid.q_min, c.grid.q_max, c.grid.n_points);
    s.want_states = c.analysis.state_metrics || c.output.wavefunctions;
    s.solver.rtol = c.solve.rtol;
    s.solver.cluster_tol = c.solve.cluster_tol;
    s.solver.max_inverse_iterations = c.solve.max_inverse_iterations;
    s.solver.threads = c.solve.threads;
    return s;
}

RunResults run_config(const RunConfig& c, unsigned workers) {
    RunResults r;
    r.config = c;
    for (const std::string& w : validate(c.potential)) r.notes.push_back("warning: " + w);

    if (c.sweep) {
        SweepPlan plan;
        plan.base = c.potential;
        plan.parameter = c.sweep->parameter;
        plan.values = linspace(c.sweep->from, c.sweep->to, c.sweep->points);
        plan.settings = solve_settings(c);
        plan.settings.want_states = false;
        plan.workers = std::max(workers, c.sweep->workers);
        r.sweep = run_sweep(plan);
        for (const SweepPoint& p : r.sweep->points) {
            if (!p.spectrum) r.notes.push_back("sweep point " + format_double(p.value) + " failed: " + p.error);
        }
        return r;
    }

    r.solution = solve_potential(c.potential, solve_settings(c));
    for (const std::string& n : r.solution->notes) r.notes.push_back(n);
    const auto& energies = r.solution->spectrum.energies;
    const std::size_t m = energies.size();

    if (c.analysis.spacings && m >= 3) {
        r.spacings = c.analysis.turning_points ? analyze_spectrum(energies) : spacings(energies);
        DegeneracyOptions d;
        d.window = c.analysis.degeneracy_window;
        d.factor = c.analysis.degeneracy_factor;
        r.near_degeneracies = near_degeneracies(*r.spacings, d);
    }
    if (c.analysis.fit) {
        const std::size_t hi = c.analysis.fit_n_hi == 0 ? m : c.analysis.fit_n_hi;
        if (hi <= m && hi >= c.analysis.fit_n_lo + 10) {
            try {
                r.fit = fit_power_law(energies, c.analysis.fit_n_lo, hi);
            } catch (const std::invalid_argument& e) {
                r.notes.push_back(std::string("fit skipped: ") + e.what());
            }
        } else {
            r.notes.push_back("fit skipped: fit range [" + std::to_string(c.analysis.fit_n_lo) + ", " +
                              std::to_string(hi) + "] does not fit in " + std::to_string(m) + " states");
        }
    }
    if (c.analysis.state_metrics) {
        const Grid& g = r.solution->grid;
        r.wells = locate_wells(c.potential, g.q_min, g.q_max, well_resolution(c.potential, g));
        r.metrics = state_metrics(r.solution->spectrum, *r.wells);
        DoubletCriteria crit;
        crit.min_localization = c.analysis.min_localization;
        crit.one_sided_asymmetry = c.analysis.one_sided_asymmetry;
        r.doublets = find_doublets(r.solution->spectrum, r.metrics, r.near_degeneracies, *r.wells, crit);
    }
    return r;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::size_t m = 0;
    for (const SweepPoint& p : sweep.points) {
        if (p.spectrum) m = std::max(m, p.spectrum->size());
    }
    std::ostringstream out;
    out << sweep.parameter;
    for (std::size_t j = 1; j <= m; ++j) out << ",E_" << j;
    out << '\n';
    for (const SweepPoint& p : sweep.points) {
        out << format_double(p.value);
        for (std::size_t j = 0; j < m; ++j) {
            out << ',' << (p.spectrum && j < p.spectrum->size() ? format_double(p.spectrum->energies[j]) : "nan");
        }
        out << '\n';
    }
    return out.str();
}

void emit_outputs(const RunResults& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    if (r.sweep) {
        write_file(dir / "sweep.csv", sweep_csv(*r.sweep));
        return;
    }
    if (!r.solution) return;
    const Spectrum& s = r.solution->spectrum;

    std::ostringstream ev;
    ev << "n,E\n";
    for (std::size_t j = 0; j < s.size(); ++j) ev << (j + 1) << ',' << format_double(s.energies[j]) << '\n';
    write_file(dir / "eigenvalues.csv", ev.str());

    if (r.spacings) {
        const SpacingAnalysis& a = *r.spacings;
        std::ostringstream sp;
        sp << "n,dE,dR,degenerate_flag\n";
        for (std::size_t i = 0; i < a.spacings.size(); ++i) {
            const std::string ratio = i < a.scaled.size() ? opt(a.scaled[i]) : "nan";
            sp << (i + 2) << ',' << format_double(a.spacings[i]) << ',' << ratio << ','
               << (a.degenerate_flags[i] ? 1 : 0) << '\n';
        }
        write_file(dir / "spacings.csv", sp.str());
        if (r.config.analysis.turning_points) {
            std::ostringstream tp;
            tp << "i,N\n";
            for (std::size_t i = 0; i < a.tp_counts.size(); ++i) tp << (i + 1) << ',' << a.tp_counts[i] << '\n';
            write_file(dir / "turning.csv", tp.str());
        }
    }
    if (r.fit) {
        std::ostringstream f;
        f << "p,c,n_lo,n_hi,residual\n"
          << format_double(r.fit->exponent) << ',' << format_double(r.fit->prefactor) << ',' << r.fit->n_lo << ','
          << r.fit->n_hi << ',' << format_double(r.fit->rms_residual) << '\n';
        write_file(dir / "fit.csv", f.str());
    }
    if (!r.metrics.empty()) {
        std::ostringstream st;
        st << "n,parity_overlap,asymmetry,dominant_well,localization\n";
        for (const StateMetrics& m : r.metrics) {
            st << m.n << ',' << opt(m.parity_overlap) << ',' << format_double(m.asymmetry) << ',' << m.dominant_well
               << ',' << format_double(m.localization) << '\n';
        }
        write_file(dir / "states.csv", st.str());
    }
    if (r.doublets) {
        std::ostringstream d;
        d << "n_lo,n_hi,splitting,left_well,right_well\n";
        for (const Doublet& x : r.doublets->doublets) {
            d << x.n_lo << ',' << x.n_hi << ',' << format_double(x.splitting) << ',' << x.left_well << ','
              << x.right_well << '\n';
        }
        write_file(dir / "doublets.csv", d.str());
    }
    if (r.config.output.wavefunctions && s.has_states()) {
        const Grid& g = r.solution->grid;
        std::ostringstream w;
        w << 'q';
        for (std::size_t j = 1; j <= s.size(); ++j) w << ",psi_" << j;
        w << '\n';
        for (std::size_t i = 0; i < g.n_points; ++i) {
            w << format_double(g.point(i));
            for (std::size_t j = 0; j < s.size(); ++j) w << ',' << format_double(s.state(j)[i]);
            w << '\n';
        }
        write_file(dir / "wavefunctions.csv", w.str());
    }
}

void write_convergence_csv(const ConvergenceTable& t, const std::filesystem::path& file) {
    std::ostringstream out;
    const std::size_t m = t.energies.empty() ? 0 : t.energies.front().size();
    out << 'h';
    for (std::size_t j = 1; j <= m; ++j) out << ",E_" << j;
    out << '\n';
    for (std::size_t row = 0; row < t.h.size(); ++row) {
        out << format_double(t.h[row]);
        for (double e : t.energies[row]) out << ',' << format_double(e);
        out << '\n';
    }
    out << "order";
    for (const auto& o : t.state_orders) out << ',' << opt(o);
    out << '\n' << "richardson_error";
    for (double e : t.richardson_error) out << ',' << format_double(e);
    out << '\n';
    write_file(file, out.str());
}

}  // namespace superexp
