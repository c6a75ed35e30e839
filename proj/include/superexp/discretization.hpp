#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "superexp/potentials.hpp"

namespace superexp {

/// Uniform grid q_i = q_min + i h, i = 0 .. n_points - 1, endpoints included.
struct Grid {
    double q_min = 0.0;
    double q_max = 0.0;
    std::size_t n_points = 0;
    double h = 0.0;

    double point(std::size_t i) const;
    std::vector<double> points() const;
    /// q_min == -q_max with an odd number of points, so q = 0 is a node.
    bool is_symmetric() const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

Grid make_grid(double q_min, double q_max, std::size_t n_points);

/// Symmetric grid on [-half_width, half_width] with odd n_points and h <= h_max.
Grid make_symmetric_grid(double half_width, double h_max);

/// Real symmetric band matrix, lower storage: diagonal(k)[i] = A(i + k, i).
class BandMatrix {
public:
    static constexpr std::size_t kHalfBandwidth = 4;

    explicit BandMatrix(std::size_t order);

    std::size_t order() const noexcept { return order_; }
    std::size_t half_bandwidth() const noexcept { return kHalfBandwidth; }

    /// Entry (i, j); zero outside the band.
    double operator()(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double value);

    std::span<const double> diagonal(std::size_t k) const { return bands_[k]; }
    std::span<double> diagonal(std::size_t k) { return bands_[k]; }

    /// y = A x.
    void multiply(std::span<const double> x, std::span<double> y) const;
    /// Maximum absolute row sum, an upper bound on the spectral norm.
    double norm_inf() const;

private:
    std::size_t order_;
    std::array<std::vector<double>, kHalfBandwidth + 1> bands_;
};

/// Eighth-order central stencil for the second derivative, scaled by 1/h^2,
/// ordered as offsets -4 .. 4.
std::array<double, 9> laplacian_row_coefficients(double h);

/// Boundary treatment of the stencil. Drop: taps beyond the grid are removed,
/// right for states that have decayed at the domain edge. OddReflection: hard
/// walls one step outside each end, ghost values mirrored with opposite sign,
/// so the closure stays high order when psi is not small near the wall.
enum class Closure { Drop, OddReflection };

/// H = -(1/2) D2 + diag(V(q_i)) with hbar = m = 1. Throws std::overflow_error
/// naming the node when V is not finite there.
BandMatrix assemble_hamiltonian(const Grid& grid, const PotentialFn& v, Closure closure = Closure::Drop);
BandMatrix assemble_hamiltonian(const Grid& grid, const PotentialSpec& spec, Closure closure = Closure::Drop);

/// Outermost classical turning points for `target_energy`, each pushed away
/// from the envelope centre by the factor `pad`. On a side where the
/// potential only forms a finite barrier the wall is clipped at the barrier top.
std::pair<double, double> auto_domain(const PotentialSpec& spec, double target_energy, double pad);

/// Same search for an arbitrary potential that rises monotonically on both
/// sides of `center` within [center - reach, center + reach].
std::pair<double, double> auto_domain(const PotentialFn& v, double center, double target_energy,
                                      double pad, double reach = 1e6);

/// Semiclassical count of states below `energy` on the confining region.
double wkb_state_count(const PotentialSpec& spec, double energy);

struct GridPolicy {
    double pad = 1.3;
    double points_per_wavelength = 20.0;
};

/// Grid that resolves every state up to `max_energy`: walls from
/// auto_domain, spacing h <= 2 pi / (ppw sqrt(2 (E_max - V_min))).
/// Reflection-symmetric potentials get a symmetric grid with a node at 0.
Grid grid_for_energy(const PotentialSpec& spec, double max_energy, const GridPolicy& policy);

/// Energy below which the semiclassical count reaches `states` with margin.
double energy_for_states(const PotentialSpec& spec, std::size_t states);

/// Debug dump: order and half bandwidth as int64 little endian, followed by
/// diagonals 0..4 (diagonal k holds order - k float64 values, little endian).
void write_band_matrix(std::ostream& out, const BandMatrix& matrix);
BandMatrix read_band_matrix(std::istream& in);

}  // namespace superexp
