#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superexp/discretization.hpp"
#include "superexp/eigensolver.hpp"
#include "superexp/potentials.hpp"
#include "superexp/spectral_analysis.hpp"

namespace superexp {

/// Discrete <psi|P psi> = sum_i psi(q_i) psi(-q_i) h. Throws std::invalid_argument
/// unless the grid is symmetric with a node at 0.
double parity_overlap(std::span<const double> state, const Grid& grid);

/// Integral of the linear interpolant of psi^2 over [a, b]; cells cut by the
/// interval edges contribute their partial area.
double interval_mass(std::span<const double> state, const Grid& grid, double a, double b);

/// interval_mass over each well interval.
std::vector<double> well_masses(std::span<const double> state, const Grid& grid, const WellGeometry& wells);

/// (P_right - P_left) / (P_right + P_left) with P_left the mass on q < 0.
double asymmetry(std::span<const double> state, const Grid& grid);

struct StateMetrics {
    std::size_t n = 0;
    std::optional<double> parity_overlap;  // only on symmetric grids
    std::vector<double> well_masses;
    double asymmetry = 0.0;
    std::size_t dominant_well = 0;
    double localization = 0.0;  // largest single-well mass
};

StateMetrics state_metrics(std::span<const double> state, std::size_t n, const Grid& grid, const WellGeometry& wells);
std::vector<StateMetrics> state_metrics(const Spectrum& spectrum, const WellGeometry& wells);

/// Within each run of eigenvalues closer than rel_gap * ||H||, rotates the states
/// so the reflection q -> -q is diagonal, then orders them by Rayleigh quotient.
/// Only meaningful for a reflection-symmetric Hamiltonian on a symmetric grid;
/// other spectra are left untouched. Returns the number of runs rotated.
std::size_t parity_adapt(Spectrum& spectrum, const BandMatrix& h, double rel_gap = 1e-8);

struct DoubletCriteria {
    double min_localization = 0.5;
    double one_sided_asymmetry = 0.9;
    double mirror_tolerance = 0.0;  // 0 picks half the smallest spacing between minima
    double node_threshold = 0.1;    // samples below this fraction of the in-well peak are ignored
};

struct Doublet {
    std::size_t n_lo = 0;
    std::size_t n_hi = 0;
    double splitting = 0.0;
    std::size_t left_well = 0;
    std::size_t right_well = 0;
    std::optional<double> parity_lo;
    std::optional<double> parity_hi;
    double localization = 0.0;  // min over the two localized combinations
    std::size_t series = 0;     // 1 + node count of the localized combination inside its well
};

struct NonDoublet {
    std::size_t n_lo = 0;
    std::size_t n_hi = 0;
    double splitting = 0.0;
    std::string reason;
};

struct DoubletReport {
    std::vector<Doublet> doublets;
    std::vector<NonDoublet> rejected;
};

/// Tests each flagged pair for the doublet signature. The pair's localized
/// combinations (psi_n +- psi_{n+1}) / sqrt(2) must each sit mostly in one well,
/// and those wells must be a mirror pair away from the central well.
DoubletReport find_doublets(const Spectrum& spectrum, std::span<const StateMetrics> metrics,
                            std::span<const NearDegeneracy> flagged, const WellGeometry& wells,
                            const DoubletCriteria& criteria = {});

struct SeriesOnset {
    std::size_t series = 0;
    std::size_t n_lo = 0;
    std::size_t n_hi = 0;
};

/// First doublet of each series whose splitting lies below depth times the
/// local median spacing (the window used for flagging), ordered by series.
std::vector<SeriesOnset> series_onsets(std::span<const Doublet> doublets, const SpacingAnalysis& analysis,
                                       std::size_t window = 11, double depth = 0.05);

/// Sign changes of the state inside [a, b], counting only samples above
/// `threshold` times the in-interval peak.
std::size_t count_nodes(std::span<const double> state, const Grid& grid, double a, double b, double threshold);

}  // namespace superexp
