#include "superexp/discretization.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "superexp/error.hpp"

namespace superexp {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

// Stencil weights for offsets 0..4 (symmetric).
constexpr std::array<double, 5> kStencil = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                            -1.0 / 560.0};

enum class SideKind { Monotone, Oscillating, Barrier };

struct Side {
    SideKind kind;
    double limit;  // Oscillating: |q| beyond which V >= E; Barrier: position of the barrier top.
    double step;   // Oscillating: scan step.
};

std::optional<double> barrier_top(const PotentialSpec& s) {
    switch (s.family) {
        case Family::SSO: return -kInvE;
        case Family::ShiftedSSO: return -2.0 * kInvE;
        case Family::SkewedSSO: return -kInvE / s.beta;
        default: return std::nullopt;
    }
}

Side side_shape(const PotentialSpec& s, double energy, int dir) {
    if (is_opp(s.family)) {
        const double envelope_power = s.alpha - std::abs(s.beta);
        const double bound = std::max(1.0, std::pow(std::max(energy, 0.0) / s.gamma, 1.0 / envelope_power));
        const double period = 2.0 * std::numbers::pi / s.k;
        return {SideKind::Oscillating, bound + period, period / 64.0};
    }
    if (dir < 0) {
        if (auto top = barrier_top(s)) return {SideKind::Barrier, *top, 0.0};
    }
    return {SideKind::Monotone, 0.0, 0.0};
}

// First q = center + dir d with V(q) >= energy for a monotone side.
double monotone_turning_point(const PotentialFn& v, double center, double energy, int dir,
                              double reach) {
    double inner = 0.0;
    double outer = 1e-3;
    while (v(center + dir * outer) < energy) {
        inner = outer;
        outer *= 2.0;
        if (outer > reach) {
            throw std::invalid_argument("auto_domain: potential never reaches the target energy within " +
                                        std::to_string(reach) + " of the centre");
        }
    }
    while (outer - inner > 1e-12 * std::max(1.0, outer)) {
        const double mid = 0.5 * (inner + outer);
        if (v(center + dir * mid) < energy) {
            inner = mid;
        } else {
            outer = mid;
        }
    }
    return center + dir * outer;
}

double bisect_crossing(const PotentialFn& v, double below, double above, double energy) {
    for (int it = 0; it < 200 && std::abs(above - below) > 1e-12 * std::max(1.0, std::abs(above)); ++it) {
        const double mid = 0.5 * (below + above);
        if (v(mid) < energy) {
            below = mid;
        } else {
            above = mid;
        }
    }
    return above;
}

// Turning point and wall position on one side of the spec's envelope centre.
std::pair<double, double> side_wall(const PotentialSpec& spec, double energy, double pad, int dir) {
    const auto v = as_function(spec);
    const double c = envelope_center(spec);
    const Side side = side_shape(spec, energy, dir);
    switch (side.kind) {
        case SideKind::Monotone: {
            const double t = monotone_turning_point(v, c, energy, dir, 1e6);
            return {t, c + pad * (t - c)};
        }
        case SideKind::Barrier: {
            const double top = side.limit;
            if (v(top) <= energy) {
                throw std::invalid_argument("auto_domain: target energy exceeds the barrier at q = " +
                                            std::to_string(top) + "; the potential does not confine it");
            }
            const double t = bisect_crossing(v, c, top, energy);
            const double wall = c + pad * (t - c);
            return {t, dir < 0 ? std::max(wall, top) : std::min(wall, top)};
        }
        case SideKind::Oscillating: {
            // Scan the whole range where V can dip below E and keep the last crossing.
            double last_below = c;
            const auto steps = static_cast<std::size_t>(std::ceil(side.limit / side.step));
            for (std::size_t i = 1; i <= steps; ++i) {
                const double q = c + dir * side.step * static_cast<double>(i);
                if (v(q) < energy) last_below = q;
            }
            const double t = bisect_crossing(v, last_below, last_below + dir * side.step, energy);
            return {t, c + pad * (t - c)};
        }
    }
    return {c, c};
}

void put_u64(std::ostream& out, std::uint64_t x) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((x >> (8 * i)) & 0xffu);
    out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw IoError("band matrix dump truncated");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return x;
}

}  // namespace

double Grid::point(std::size_t i) const {
    if (i == 0) return q_min;
    if (i + 1 == n_points) return q_max;
    if (is_symmetric()) {
        // Offsets from the centre node keep mirrored nodes exact negatives.
        const auto mid = static_cast<double>(n_points / 2);
        return (static_cast<double>(i) - mid) * h;
    }
    return q_min + h * static_cast<double>(i);
}

std::vector<double> Grid::points() const {
    std::vector<double> q(n_points);
    for (std::size_t i = 0; i < n_points; ++i) q[i] = point(i);
    return q;
}

bool Grid::is_symmetric() const { return q_min == -q_max && n_points % 2 == 1; }

Grid make_grid(double q_min, double q_max, std::size_t n_points) {
    if (!std::isfinite(q_min) || !std::isfinite(q_max) || !(q_max > q_min)) {
        throw std::invalid_argument("make_grid: q_max must exceed q_min");
    }
    if (n_points < 9) throw std::invalid_argument("make_grid: need at least 9 points for the 9-point stencil");
    return {q_min, q_max, n_points, (q_max - q_min) / static_cast<double>(n_points - 1)};
}

Grid make_symmetric_grid(double half_width, double h_max) {
    if (!(half_width > 0.0) || !(h_max > 0.0)) {
        throw std::invalid_argument("make_symmetric_grid: half_width and h_max must be positive");
    }
    auto half_cells = static_cast<std::size_t>(std::ceil(half_width / h_max));
    half_cells = std::max<std::size_t>(half_cells, 4);
    return make_grid(-half_width, half_width, 2 * half_cells + 1);
}

BandMatrix::BandMatrix(std::size_t order) : order_(order) {
    if (order == 0) throw std::invalid_argument("BandMatrix: order must be positive");
    for (std::size_t k = 0; k <= kHalfBandwidth; ++k) {
        bands_[k].assign(order > k ? order - k : 0, 0.0);
    }
}

double BandMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    const std::size_t k = i - j;
    if (k > kHalfBandwidth || i >= order_) return 0.0;
    return bands_[k][j];
}

void BandMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i < j) std::swap(i, j);
    const std::size_t k = i - j;
    if (k > kHalfBandwidth || i >= order_) throw std::out_of_range("BandMatrix::set outside the band");
    bands_[k][j] = value;
}

void BandMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = order_;
    for (std::size_t i = 0; i < n; ++i) y[i] = bands_[0][i] * x[i];
    for (std::size_t k = 1; k <= kHalfBandwidth && k < n; ++k) {
        const auto& b = bands_[k];
        for (std::size_t j = 0; j + k < n; ++j) {
            y[j + k] += b[j] * x[j];
            y[j] += b[j] * x[j + k];
        }
    }
}

double BandMatrix::norm_inf() const {
    const std::size_t n = order_;
    std::vector<double> row(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i] = std::abs(bands_[0][i]);
    for (std::size_t k = 1; k <= kHalfBandwidth && k < n; ++k) {
        for (std::size_t j = 0; j + k < n; ++j) {
            row[j + k] += std::abs(bands_[k][j]);
            row[j] += std::abs(bands_[k][j]);
        }
    }
    return *std::max_element(row.begin(), row.end());
}

std::array<double, 9> laplacian_row_coefficients(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("laplacian_row_coefficients: h must be positive");
    const double inv_h2 = 1.0 / (h * h);
    std::array<double, 9> c{};
    for (int off = -4; off <= 4; ++off) c[off + 4] = kStencil[std::abs(off)] * inv_h2;
    return c;
}

BandMatrix assemble_hamiltonian(const Grid& grid, const PotentialFn& v, Closure closure) {
    if (grid.n_points < 9 || !(grid.h > 0.0)) throw std::invalid_argument("assemble_hamiltonian: invalid grid");
    const auto c = laplacian_row_coefficients(grid.h);
    BandMatrix m(grid.n_points);
    auto diag = m.diagonal(0);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double q = grid.point(i);
        const double vi = v(q);
        if (!std::isfinite(vi)) {
            throw std::overflow_error("assemble_hamiltonian: potential not finite at node " + std::to_string(i) +
                                      " (q = " + std::to_string(q) + "); domain too wide");
        }
        diag[i] = -0.5 * c[4] + vi;
    }
    for (std::size_t k = 1; k <= BandMatrix::kHalfBandwidth; ++k) {
        auto band = m.diagonal(k);
        std::fill(band.begin(), band.end(), -0.5 * c[4 + k]);
    }
    if (closure == Closure::OddReflection) {
        // Walls sit one step outside each end; a tap at ghost index -1 - d reads -psi(d - 1).
        const std::size_t n = grid.n_points;
        for (std::size_t i = 0; i < BandMatrix::kHalfBandwidth; ++i) {
            for (std::size_t k = i + 2; k <= BandMatrix::kHalfBandwidth; ++k) {
                const std::size_t mirror = k - i - 2;
                if (mirror > i) continue;  // reached again from row `mirror`
                const double w = 0.5 * c[4 + k];
                m.set(i, mirror, m(i, mirror) + w);
                m.set(n - 1 - i, n - 1 - mirror, m(n - 1 - i, n - 1 - mirror) + w);
            }
        }
    }
    return m;
}

BandMatrix assemble_hamiltonian(const Grid& grid, const PotentialSpec& spec, Closure closure) {
    return assemble_hamiltonian(grid, as_function(spec), closure);
}

std::pair<double, double> auto_domain(const PotentialSpec& spec, double target_energy, double pad) {
    validate(spec);
    if (!(pad >= 1.0)) throw std::invalid_argument("auto_domain: pad must be >= 1");
    const double c = envelope_center(spec);
    if (!(target_energy > eval_potential(spec, c))) {
        throw std::invalid_argument("auto_domain: target energy must lie above the potential minimum");
    }
    const auto left = side_wall(spec, target_energy, pad, -1);
    const auto right = side_wall(spec, target_energy, pad, +1);
    return {left.second, right.second};
}

std::pair<double, double> auto_domain(const PotentialFn& v, double center, double target_energy, double pad,
                                      double reach) {
    if (!(pad >= 1.0)) throw std::invalid_argument("auto_domain: pad must be >= 1");
    if (!(target_energy > v(center))) {
        throw std::invalid_argument("auto_domain: target energy must lie above the potential minimum");
    }
    const double lo = monotone_turning_point(v, center, target_energy, -1, reach);
    const double hi = monotone_turning_point(v, center, target_energy, +1, reach);
    return {center + pad * (lo - center), center + pad * (hi - center)};
}

double wkb_state_count(const PotentialSpec& spec, double energy) {
    const auto [a, b] = auto_domain(spec, energy, 1.0);
    std::size_t samples = 20000;
    if (is_opp(spec.family)) {
        const double period = 2.0 * std::numbers::pi / spec.k;
        samples = std::max(samples, static_cast<std::size_t>(64.0 * (b - a) / period));
    }
    const double dq = (b - a) / static_cast<double>(samples);
    double action = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double q = a + dq * (static_cast<double>(i) + 0.5);
        const double kinetic = energy - eval_potential(spec, q);
        if (kinetic > 0.0) action += std::sqrt(2.0 * kinetic);
    }
    return action * dq / std::numbers::pi + 0.5;
}

double energy_for_states(const PotentialSpec& spec, std::size_t states) {
    validate(spec);
    const double target = 1.15 * static_cast<double>(states) + 5.0;
    const double floor = eval_potential(spec, envelope_center(spec));
    double cap = std::numeric_limits<double>::infinity();
    if (auto top = barrier_top(spec)) cap = eval_potential(spec, *top);

    double scale = std::max(1.0, std::abs(floor));
    double lo = floor;
    double hi = floor + scale;
    for (int it = 0; it < 200; ++it) {
        if (hi >= cap) {
            hi = floor + 0.999 * (cap - floor);
            if (wkb_state_count(spec, hi) < target) return hi;
            break;
        }
        if (wkb_state_count(spec, hi) >= target) break;
        lo = hi;
        hi = floor + 2.0 * (hi - floor);
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (wkb_state_count(spec, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

Grid grid_for_energy(const PotentialSpec& spec, double max_energy, const GridPolicy& policy) {
    if (!(policy.points_per_wavelength > 0.0)) {
        throw std::invalid_argument("grid policy: points_per_wavelength must be positive");
    }
    const auto [a, b] = auto_domain(spec, max_energy, policy.pad);
    const double vmin = eval_potential(spec, envelope_center(spec));
    const double h_max =
        2.0 * std::numbers::pi / (policy.points_per_wavelength * std::sqrt(2.0 * (max_energy - vmin)));
    if (is_reflection_symmetric(spec)) {
        return make_symmetric_grid(std::max(-a, b), h_max);
    }
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / h_max)) + 1;
    return make_grid(a, b, std::max<std::size_t>(n, 9));
}

void write_band_matrix(std::ostream& out, const BandMatrix& matrix) {
    put_u64(out, matrix.order());
    put_u64(out, matrix.half_bandwidth());
    for (std::size_t k = 0; k <= matrix.half_bandwidth(); ++k) {
        for (double x : matrix.diagonal(k)) put_u64(out, std::bit_cast<std::uint64_t>(x));
    }
    if (!out) throw IoError("failed to write band matrix");
}

BandMatrix read_band_matrix(std::istream& in) {
    const auto order = get_u64(in);
    const auto bw = get_u64(in);
    if (bw != BandMatrix::kHalfBandwidth) throw IoError("band matrix dump: unsupported half bandwidth");
    BandMatrix m(order);
    for (std::size_t k = 0; k <= bw; ++k) {
        for (double& x : m.diagonal(k)) x = std::bit_cast<double>(get_u64(in));
    }
    return m;
}

}  // namespace superexp
