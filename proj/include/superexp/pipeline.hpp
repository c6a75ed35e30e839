#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "superexp/config.hpp"
#include "superexp/spectral_analysis.hpp"
#include "superexp/state_analysis.hpp"
#include "superexp/sweep.hpp"

namespace superexp {

struct RunResults {
    RunConfig config;
    std::optional<Solution> solution;
    std::optional<SpacingAnalysis> spacings;
    std::optional<PowerLawFit> fit;
    std::vector<NearDegeneracy> near_degeneracies;
    std::optional<WellGeometry> wells;
    std::vector<StateMetrics> metrics;
    std::optional<DoubletReport> doublets;
    std::optional<SweepResult> sweep;
    std::vector<std::string> notes;
};

SolveSettings solve_settings(const RunConfig& config);

/// Runs the configured sweep, or else a single solve followed by the enabled analyses.
RunResults run_config(const RunConfig& config, unsigned workers = 1);

/// Writes the CSV files for whatever `results` holds into `dir` (created if needed).
/// Throws IoError when a file cannot be written.
void emit_outputs(const RunResults& results, const std::filesystem::path& dir);

void write_convergence_csv(const ConvergenceTable& table, const std::filesystem::path& file);

/// Wide sweep table: parameter value, then E_1..E_M ("nan" for failed points).
std::string sweep_csv(const SweepResult& sweep);

struct FigureRun {
    std::string name;
    RunConfig config;
};

/// Canned configurations for figure ids fig1 .. fig12.
std::vector<FigureRun> figure_runs(const std::string& figure);
std::vector<std::string> figure_ids();

}  // namespace superexp
