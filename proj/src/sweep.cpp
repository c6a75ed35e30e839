#include "superexp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "superexp/error.hpp"
#include "superexp/state_analysis.hpp"

namespace superexp {
namespace {

Grid grid_with_spacing(double q_min, double q_max, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    auto intervals = static_cast<std::size_t>(std::llround((q_max - q_min) / h));
    if (q_min == -q_max && intervals % 2 == 1) ++intervals;
    return make_grid(q_min, q_max, std::max<std::size_t>(intervals + 1, 9));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

Solution solve_on_grid(const PotentialSpec& spec, const Grid& grid, const SolveSettings& settings) {
    Solution out;
    out.spec = spec;
    out.grid = grid;
    if (settings.states > grid.n_points) {
        throw SolverError("requested " + std::to_string(settings.states) + " states on a grid of " +
                              std::to_string(grid.n_points) + " points",
                          0);
    }
    const BandMatrix h = assemble_hamiltonian(grid, spec);
    out.spectrum = solve_lowest(h, grid, settings.states, settings.want_states, settings.solver);
    if (settings.want_states && settings.parity_adapt && is_reflection_symmetric(spec) && grid.is_symmetric()) {
        parity_adapt(out.spectrum, h);
    }
    return out;
}

Solution solve_potential(const PotentialSpec& spec, const SolveSettings& settings) {
    if (settings.grid) return solve_on_grid(spec, *settings.grid, settings);
    double target = energy_for_states(spec, settings.states);
    Solution sol = solve_on_grid(spec, grid_for_energy(spec, target, settings.policy), settings);
    sol.design_energy = target;
    for (int attempt = 0; attempt < 4 && sol.spectrum.energies.back() > target; ++attempt) {
        const double raised = target + 1.5 * (sol.spectrum.energies.back() - target) + 0.1 * std::abs(target);
        Grid grid;
        try {
            grid = grid_for_energy(spec, raised, settings.policy);
        } catch (const std::invalid_argument& e) {
            sol.notes.push_back(std::string("highest states lie above the confinement limit: ") + e.what());
            break;
        }
        target = raised;
        std::vector<std::string> notes = std::move(sol.notes);
        sol = solve_on_grid(spec, grid, settings);
        sol.design_energy = target;
        sol.notes = std::move(notes);
    }
    if (sol.spectrum.energies.back() > sol.design_energy) {
        sol.notes.push_back("E_M exceeds the design energy of the grid");
    }
    return sol;
}

PotentialSpec with_parameter(PotentialSpec spec, const std::string& name, double value) {
    if (name == "alpha") {
        spec.alpha = value;
    } else if (name == "beta") {
        spec.beta = value;
    } else if (name == "k") {
        spec.k = value;
    } else if (name == "phi") {
        spec.phi = value;
    } else if (name == "gamma") {
        spec.gamma = value;
    } else {
        throw std::invalid_argument("unknown sweep parameter '" + name + "' (expected alpha, beta, k, phi, gamma)");
    }
    return spec;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> v(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
    v.back() = hi;
    return v;
}

Grid shared_sweep_grid(const SweepPlan& plan) {
    if (plan.settings.grid) return *plan.settings.grid;
    double q_min = 0.0;
    double q_max = 0.0;
    double h_max = std::numeric_limits<double>::infinity();
    bool centred = true;
    bool first = true;
    for (double value : plan.values) {
        const PotentialSpec spec = with_parameter(plan.base, plan.parameter, value);
        const double energy = energy_for_states(spec, plan.settings.states);
        const Grid g = grid_for_energy(spec, energy, plan.settings.policy);
        q_min = first ? g.q_min : std::min(q_min, g.q_min);
        q_max = first ? g.q_max : std::max(q_max, g.q_max);
        h_max = std::min(h_max, g.h);
        centred = centred && envelope_center(spec) == 0.0;
        first = false;
    }
    if (centred) return make_symmetric_grid(std::max(-q_min, q_max), h_max);
    return grid_with_spacing(q_min, q_max, h_max);
}

SweepResult run_sweep(const SweepPlan& plan) {
    if (plan.values.empty()) throw std::invalid_argument("sweep: no parameter values");
    for (std::size_t i = 0; i < plan.values.size(); ++i) {
        if (!std::isfinite(plan.values[i])) throw std::invalid_argument("sweep: non-finite parameter value");
        if (i > 0) {
            const bool up = plan.values[1] > plan.values[0];
            const bool ok = up ? plan.values[i] > plan.values[i - 1] : plan.values[i] < plan.values[i - 1];
            if (!ok) throw std::invalid_argument("sweep: parameter values must be strictly monotone");
        }
    }
    with_parameter(plan.base, plan.parameter, plan.values.front());

    SweepResult result;
    result.parameter = plan.parameter;
    result.settings = plan.settings;
    result.grid = shared_sweep_grid(plan);
    result.points.resize(plan.values.size());

    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::size_t>(plan.workers == 0 ? 1 : plan.workers, 1, plan.values.size()));
    SolveSettings settings = plan.settings;
    if (workers > 1) settings.solver.threads = 1;

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < plan.values.size(); i = next++) {
            SweepPoint& point = result.points[i];
            point.value = plan.values[i];
            try {
                point.spec = with_parameter(plan.base, plan.parameter, point.value);
                point.spectrum = solve_on_grid(point.spec, result.grid, settings).spectrum;
            } catch (const std::exception& e) {
                point.error = e.what();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const SweepPoint& p : result.points) {
        if (!p.spectrum) ++result.failures;
    }
    if (result.failures == result.points.size()) {
        throw SolverError("sweep: every point failed; first error: " + result.points.front().error, 0);
    }
    return result;
}

ConvergenceTable convergence_study(const PotentialFn& v, double q_min, double q_max, std::size_t states,
                                   const std::vector<double>& h_list, const SolverOptions& opts) {
    if (h_list.empty()) throw std::invalid_argument("convergence_study: empty spacing list");
    for (std::size_t i = 1; i < h_list.size(); ++i) {
        if (!(h_list[i] < h_list[i - 1])) throw std::invalid_argument("convergence_study: spacings must strictly decrease");
    }
    ConvergenceTable t;
    for (double h : h_list) {
        const Grid g = grid_with_spacing(q_min, q_max, h);
        t.h.push_back(g.h);
        t.energies.push_back(solve_lowest(assemble_hamiltonian(g, v), states, false, opts).energies);
    }
    const std::size_t rows = t.h.size();
    t.state_orders.assign(states, std::nullopt);
    t.richardson_error.assign(states, 0.0);
    std::vector<double> resolved;
    for (std::size_t s = 0; s < states; ++s) {
        if (rows < 3) continue;
        // Slope of log|E(h_k) - E(h_{k+1})| against log h_k.
        std::vector<double> x;
        std::vector<double> y;
        bool clean = true;
        for (std::size_t k = 0; k + 1 < rows; ++k) {
            const double d = std::abs(t.energies[k][s] - t.energies[k + 1][s]);
            if (!(d > 1e-12 * std::max(1.0, std::abs(t.energies[k + 1][s])))) clean = false;
            x.push_back(std::log(t.h[k]));
            y.push_back(std::log(std::max(d, 1e-300)));
        }
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            mx += x[k];
            my += y[k];
        }
        mx /= static_cast<double>(x.size());
        my /= static_cast<double>(y.size());
        double sxx = 0.0;
        double sxy = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            sxx += (x[k] - mx) * (x[k] - mx);
            sxy += (x[k] - mx) * (y[k] - my);
        }
        const double order = sxy / sxx;
        t.state_orders[s] = order;
        if (clean) resolved.push_back(order);
    }
    for (std::size_t s = 0; s < states && rows >= 2; ++s) {
        const double r = t.h[rows - 2] / t.h[rows - 1];
        const double p = t.state_orders[s].value_or(8.0);
        t.richardson_error[s] = (t.energies[rows - 2][s] - t.energies[rows - 1][s]) / (std::pow(r, p) - 1.0);
    }
    if (!resolved.empty()) t.fitted_order = median(resolved);
    return t;
}

ConvergenceTable convergence_study(const PotentialSpec& spec, double q_min, double q_max, std::size_t states,
                                   const std::vector<double>& h_list, const SolverOptions& opts) {
    validate(spec);
    return convergence_study(as_function(spec), q_min, q_max, states, h_list, opts);
}

}  // namespace superexp
