#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace superexp {

// State labels n start at 1 for the ground state. Spacing n is
// dE_n = E_n - E_{n-1} (n >= 2) and ratio n is dR_n = dE_{n+1} / dE_n.
struct SpacingAnalysis {
    std::vector<double> spacings;               // spacings[i] is dE_{i+2}
    // scaled[i] is dR_{i+2}; empty when its denominator dE_{i+2} is below the floor.
    std::vector<std::optional<double>> scaled;
    std::vector<bool> degenerate_flags;         // per spacing, dE_n < floor
    std::vector<std::size_t> turning_indices;
    std::vector<std::size_t> tp_counts;
    double floor = 0.0;

    double spacing(std::size_t n) const { return spacings.at(n - 2); }
    std::optional<double> ratio(std::size_t n) const { return scaled.at(n - 2); }
    std::size_t last_index() const { return spacings.size() + 1; }
};

/// Spacings and scaled spacings with floor flags; turning points are left empty.
SpacingAnalysis spacings(std::span<const double> energies);

/// spacings() plus turning points.
SpacingAnalysis analyze_spectrum(std::span<const double> energies);

struct TurningPoints {
    std::vector<std::size_t> indices;  // state labels n
    std::vector<std::size_t> counts;   // N(i) = indices[i + 1] - indices[i]
};

/// Trend reversals of dE_n. `spacing_values[i]` carries label first_label + i.
/// Differences within 1e-14 (relative) of zero continue the previous trend.
TurningPoints turning_points(std::span<const double> spacing_values, std::size_t first_label = 2);

/// Rebuilds turning indices from the first index and the N(i) sequence.
std::vector<std::size_t> reconstruct_turning_indices(std::size_t first, std::span<const std::size_t> counts);

std::map<std::size_t, std::size_t> histogram(std::span<const std::size_t> values);

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    std::size_t n_lo = 0;
    std::size_t n_hi = 0;
    double rms_residual = 0.0;
};

/// Least squares of ln E_n on ln n for n in [n_lo, n_hi] (inclusive, 1-based labels).
PowerLawFit fit_power_law(std::span<const double> energies, std::size_t n_lo, std::size_t n_hi);

/// Exponents for the window shifted by -shift and +shift (clamped to the valid range).
std::pair<double, double> fit_sensitivity(std::span<const double> energies, std::size_t n_lo, std::size_t n_hi,
                                          std::size_t shift = 20);

struct NearDegeneracy {
    std::size_t n = 0;  // spacing label; the pair is (n - 1, n)
    double spacing = 0.0;
};

struct DegeneracyOptions {
    std::size_t window = 11;
    double factor = 0.2;
};

/// Median of the spacings in the centred window around each spacing (shifted inward at the ends).
std::vector<double> window_medians(const SpacingAnalysis& analysis, std::size_t window);

/// Spacings below factor * median of the centred window (shifted inward at the ends).
std::vector<NearDegeneracy> near_degeneracies(const SpacingAnalysis& analysis, const DegeneracyOptions& opts = {});

}  // namespace superexp
