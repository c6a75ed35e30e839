#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "superexp/potentials.hpp"

namespace superexp {

struct GridConfig {
    bool explicit_grid = false;
    double pad = 1.3;
    double points_per_wavelength = 20.0;
    double q_min = 0.0;
    double q_max = 0.0;
    std::size_t n_points = 0;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct SolveConfig {
    std::size_t states = 50;
    double rtol = 1e-12;
    double cluster_tol = 1e-5;
    std::size_t max_inverse_iterations = 12;
    unsigned threads = 0;

    friend bool operator==(const SolveConfig&, const SolveConfig&) = default;
};

struct AnalysisConfig {
    bool spacings = true;
    bool turning_points = true;
    bool fit = true;
    std::size_t fit_n_lo = 10;
    std::size_t fit_n_hi = 0;  // 0 means the highest computed state
    std::size_t degeneracy_window = 11;
    double degeneracy_factor = 0.2;
    bool state_metrics = true;
    double min_localization = 0.5;
    double one_sided_asymmetry = 0.9;

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

struct OutputConfig {
    std::string directory = "out";
    bool wavefunctions = false;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct SweepConfig {
    std::string parameter = "phi";
    double from = 0.0;
    double to = 0.0;
    std::size_t points = 128;
    unsigned workers = 1;

    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct RunConfig {
    PotentialSpec potential;
    GridConfig grid;
    SolveConfig solve;
    AnalysisConfig analysis;
    OutputConfig output;
    std::optional<SweepConfig> sweep;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the sectioned key = value format ([potential], [grid], [solve],
/// [analysis], [output], optional [sweep]). '#' and ';' start comments.
/// Throws ConfigError with line and column on syntax errors, unknown or
/// duplicate keys, and invalid values.
RunConfig parse_config(std::string_view text);

/// Canonical text for `config`, listing every key; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

}  // namespace superexp
