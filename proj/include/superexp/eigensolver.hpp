#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "superexp/discretization.hpp"

namespace superexp {

/// Lowest eigenpairs of a Hamiltonian. When a grid is attached the states are
/// normalized in the discrete L2 norm (sum psi_i^2 h = 1); otherwise they are
/// Euclidean unit vectors. Each state's largest-magnitude component is positive.
struct Spectrum {
    std::vector<double> energies;
    /// Column-major, one column of length `dimension` per state (empty when not requested).
    std::vector<double> state_data;
    std::size_t dimension = 0;
    std::optional<Grid> grid;
    /// ||H v - E v||_2 for the Euclidean-normalized v.
    std::vector<double> residual_norms;
    /// ||H||_inf of the solved matrix.
    double matrix_norm = 0.0;

    std::size_t size() const noexcept { return energies.size(); }
    bool has_states() const noexcept { return !state_data.empty(); }
    std::span<const double> state(std::size_t j) const;
    std::span<double> state(std::size_t j);
};

struct SolverOptions {
    /// Residual target relative to ||H||.
    double rtol = 1e-12;
    /// Eigenvalues closer than cluster_tol * ||H|| share one reorthogonalized block.
    double cluster_tol = 1e-5;
    std::size_t max_inverse_iterations = 12;
    /// Threads for the bisection phase; 0 picks hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
};

/// The m algebraically smallest eigenvalues (and optionally eigenvectors) of a
/// symmetric band matrix: Givens band-to-tridiagonal reduction, Sturm-count
/// bisection, then inverse iteration on the band matrix with
/// reorthogonalization inside clusters. Deterministic for identical inputs.
Spectrum solve_lowest(const BandMatrix& h, std::size_t m, bool want_states, const SolverOptions& opts = {});

/// As above, with states scaled to unit discrete L2 norm on `grid`.
Spectrum solve_lowest(const BandMatrix& h, const Grid& grid, std::size_t m, bool want_states,
                      const SolverOptions& opts = {});

/// Spacings below this value (1e-12 max|E|) are reported as numerically degenerate.
double spacing_floor(std::span<const double> energies);
double spacing_floor(const Spectrum& spectrum);

/// Diagonal and off-diagonal of a tridiagonal matrix orthogonally similar to `h`.
struct Tridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;
};
Tridiagonal reduce_to_tridiagonal(const BandMatrix& h);

/// Number of eigenvalues of the tridiagonal matrix strictly below x.
std::size_t sturm_count(const Tridiagonal& t, double x);

}  // namespace superexp
