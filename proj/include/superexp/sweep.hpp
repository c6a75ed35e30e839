#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "superexp/discretization.hpp"
#include "superexp/eigensolver.hpp"
#include "superexp/potentials.hpp"

namespace superexp {

struct SolveSettings {
    std::size_t states = 50;
    GridPolicy policy;
    std::optional<Grid> grid;  // explicit grid; skips the automatic policy
    bool want_states = false;
    bool parity_adapt = true;
    SolverOptions solver;
};

struct Solution {
    PotentialSpec spec;
    Grid grid;
    Spectrum spectrum;
    double design_energy = 0.0;  // energy the grid was sized for (0 for explicit grids)
    std::vector<std::string> notes;
};

/// Builds the grid (unless given), solves for the lowest states, and on a
/// symmetric problem makes near-degenerate states parity eigenstates. When the
/// highest state ends above the energy the grid was sized for, the grid is
/// rebuilt for a higher energy (up to four times).
Solution solve_potential(const PotentialSpec& spec, const SolveSettings& settings);

/// Same, on a caller-supplied grid.
Solution solve_on_grid(const PotentialSpec& spec, const Grid& grid, const SolveSettings& settings);

/// Parameter names accepted by sweeps: alpha, beta, k, phi, gamma.
PotentialSpec with_parameter(PotentialSpec spec, const std::string& name, double value);

struct SweepPlan {
    PotentialSpec base;
    std::string parameter;
    std::vector<double> values;
    SolveSettings settings;
    unsigned workers = 1;
};

struct SweepPoint {
    double value = 0.0;
    PotentialSpec spec;
    std::optional<Spectrum> spectrum;  // empty when the point failed
    std::string error;
};

struct SweepResult {
    std::string parameter;
    Grid grid;  // shared by every point
    SolveSettings settings;
    std::vector<SweepPoint> points;
    std::size_t failures = 0;
};

/// Values spaced evenly over [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Grid covering every point of the plan: union of the automatic domains and
/// the finest spacing. Symmetric when every point is centred on q = 0.
Grid shared_sweep_grid(const SweepPlan& plan);

/// Solves every point on the shared grid. Failed points are recorded with
/// their error; the call throws SolverError only when all points fail.
/// Results do not depend on the number of workers.
SweepResult run_sweep(const SweepPlan& plan);

struct ConvergenceTable {
    std::vector<double> h;
    std::vector<std::vector<double>> energies;        // energies[row][state]
    std::vector<std::optional<double>> state_orders;  // fitted order per state
    std::vector<double> richardson_error;             // estimated error of the finest row
    std::optional<double> fitted_order;               // median over resolved states
};

/// Solves on [q_min, q_max] for each spacing (strictly decreasing) and fits the
/// convergence order from successive differences.
ConvergenceTable convergence_study(const PotentialFn& v, double q_min, double q_max, std::size_t states,
                                   const std::vector<double>& h_list, const SolverOptions& opts = {});
ConvergenceTable convergence_study(const PotentialSpec& spec, double q_min, double q_max, std::size_t states,
                                   const std::vector<double>& h_list, const SolverOptions& opts = {});

}  // namespace superexp
