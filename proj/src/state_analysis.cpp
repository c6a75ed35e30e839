#include "superexp/state_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace superexp {
namespace {

void check_length(std::span<const double> state, const Grid& grid) {
    if (state.size() != grid.n_points) throw std::invalid_argument("state length does not match the grid");
}

// Eigenvectors of a small symmetric matrix (row-major, r x r) by cyclic Jacobi.
std::vector<double> small_eigenvectors(std::vector<double> a, std::size_t r) {
    std::vector<double> v(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) v[i * r + i] = 1.0;
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) off += a[i * r + j] * a[i * r + j];
        if (off < 1e-300) break;
        for (std::size_t p = 0; p + 1 < r; ++p) {
            for (std::size_t q = p + 1; q < r; ++q) {
                const double apq = a[p * r + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * r + q] - a[p * r + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < r; ++k) {
                    const double akp = a[k * r + p];
                    const double akq = a[k * r + q];
                    a[k * r + p] = c * akp - s * akq;
                    a[k * r + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < r; ++k) {
                    const double apk = a[p * r + k];
                    const double aqk = a[q * r + k];
                    a[p * r + k] = c * apk - s * aqk;
                    a[q * r + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < r; ++k) {
                    const double vkp = v[k * r + p];
                    const double vkq = v[k * r + q];
                    v[k * r + p] = c * vkp - s * vkq;
                    v[k * r + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    return v;  // column j is eigenvector j
}

bool reflection_symmetric(const BandMatrix& h, double tol) {
    const auto d = h.diagonal(0);
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        if (std::abs(d[i] - d[n - 1 - i]) > tol) return false;
    }
    return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

double parity_overlap(std::span<const double> state, const Grid& grid) {
    if (!grid.is_symmetric()) throw std::invalid_argument("parity_overlap: grid is not symmetric about q = 0");
    check_length(state, grid);
    const std::size_t n = state.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += state[i] * state[n - 1 - i];
    return s * grid.h;
}

double interval_mass(std::span<const double> state, const Grid& grid, double a, double b) {
    check_length(state, grid);
    const double lo_edge = std::max(a, grid.q_min);
    const double hi_edge = std::min(b, grid.q_max);
    if (!(hi_edge > lo_edge)) return 0.0;
    const double h = grid.h;
    const std::size_t last_cell = grid.n_points - 2;
    auto first = static_cast<std::size_t>(std::max(0.0, std::floor((lo_edge - grid.q_min) / h)));
    first = std::min(first, last_cell);
    double mass = 0.0;
    for (std::size_t i = first; i <= last_cell; ++i) {
        const double q0 = grid.point(i);
        const double q1 = grid.point(i + 1);
        if (q0 >= hi_edge) break;
        const double lo = std::max(lo_edge, q0);
        const double hi = std::min(hi_edge, q1);
        if (!(hi > lo)) continue;
        const double width = q1 - q0;
        const double t0 = (lo - q0) / width;
        const double t1 = (hi - q0) / width;
        const double f0 = state[i] * state[i];
        const double f1 = state[i + 1] * state[i + 1];
        mass += width * ((t1 - t0) * f0 + 0.5 * (f1 - f0) * (t1 * t1 - t0 * t0));
    }
    return mass;
}

std::vector<double> well_masses(std::span<const double> state, const Grid& grid, const WellGeometry& wells) {
    std::vector<double> out;
    out.reserve(wells.well_intervals.size());
    for (const auto& [a, b] : wells.well_intervals) out.push_back(interval_mass(state, grid, a, b));
    return out;
}

double asymmetry(std::span<const double> state, const Grid& grid) {
    const double left = interval_mass(state, grid, grid.q_min, 0.0);
    const double right = interval_mass(state, grid, 0.0, grid.q_max);
    const double total = left + right;
    return total > 0.0 ? (right - left) / total : 0.0;
}

StateMetrics state_metrics(std::span<const double> state, std::size_t n, const Grid& grid, const WellGeometry& wells) {
    StateMetrics m;
    m.n = n;
    if (grid.is_symmetric()) m.parity_overlap = parity_overlap(state, grid);
    m.well_masses = well_masses(state, grid, wells);
    m.asymmetry = asymmetry(state, grid);
    if (!m.well_masses.empty()) {
        const auto it = std::max_element(m.well_masses.begin(), m.well_masses.end());
        m.dominant_well = static_cast<std::size_t>(it - m.well_masses.begin());
        m.localization = *it;
    }
    return m;
}

std::vector<StateMetrics> state_metrics(const Spectrum& spectrum, const WellGeometry& wells) {
    if (!spectrum.has_states() || !spectrum.grid) {
        throw std::invalid_argument("state_metrics: spectrum carries no grid-normalized states");
    }
    std::vector<StateMetrics> out;
    out.reserve(spectrum.size());
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        out.push_back(state_metrics(spectrum.state(j), j + 1, *spectrum.grid, wells));
    }
    return out;
}

std::size_t parity_adapt(Spectrum& spectrum, const BandMatrix& h, double rel_gap) {
    if (!spectrum.has_states() || !spectrum.grid || !spectrum.grid->is_symmetric()) return 0;
    const double norm = h.norm_inf();
    if (!reflection_symmetric(h, 1e-13 * norm)) return 0;
    const std::size_t n = spectrum.dimension;
    const std::size_t m = spectrum.size();
    const double gap = rel_gap * norm;
    std::vector<double> hv(n);
    std::size_t rotated = 0;

    std::size_t start = 0;
    while (start < m) {
        std::size_t end = start + 1;
        while (end < m && spectrum.energies[end] - spectrum.energies[end - 1] < gap) ++end;
        const std::size_t r = end - start;
        if (r >= 2) {
            std::vector<double> j(r * r);
            for (std::size_t a = 0; a < r; ++a) {
                const auto va = spectrum.state(start + a);
                for (std::size_t b = a; b < r; ++b) {
                    const auto vb = spectrum.state(start + b);
                    double s = 0.0;
                    for (std::size_t i = 0; i < n; ++i) s += va[i] * vb[n - 1 - i];
                    j[a * r + b] = j[b * r + a] = s;
                }
            }
            const std::vector<double> u = small_eigenvectors(j, r);
            std::vector<double> block(n * r, 0.0);
            for (std::size_t k = 0; k < r; ++k) {
                for (std::size_t a = 0; a < r; ++a) {
                    const double c = u[a * r + k];
                    const auto va = spectrum.state(start + a);
                    for (std::size_t i = 0; i < n; ++i) block[k * n + i] += c * va[i];
                }
            }
            std::vector<std::pair<double, std::size_t>> order;
            for (std::size_t k = 0; k < r; ++k) {
                std::span<const double> v(block.data() + k * n, n);
                h.multiply(v, hv);
                order.emplace_back(dot(v, hv) / dot(v, v), k);
            }
            std::sort(order.begin(), order.end());
            for (std::size_t k = 0; k < r; ++k) {
                auto dst = spectrum.state(start + k);
                std::span<const double> src(block.data() + order[k].second * n, n);
                std::copy(src.begin(), src.end(), dst.begin());
                std::size_t imax = 0;
                for (std::size_t i = 1; i < n; ++i) {
                    if (std::abs(dst[i]) > std::abs(dst[imax])) imax = i;
                }
                if (dst[imax] < 0.0) {
                    for (double& x : dst) x = -x;
                }
                if (!spectrum.residual_norms.empty()) {
                    h.multiply(dst, hv);
                    const double e = spectrum.energies[start + k];
                    double r2 = 0.0;
                    for (std::size_t i = 0; i < n; ++i) r2 += (hv[i] - e * dst[i]) * (hv[i] - e * dst[i]);
                    spectrum.residual_norms[start + k] = std::sqrt(r2 / dot(dst, dst));
                }
            }
            ++rotated;
        }
        start = end;
    }
    return rotated;
}

std::size_t count_nodes(std::span<const double> state, const Grid& grid, double a, double b, double threshold) {
    check_length(state, grid);
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double q = grid.point(i);
        if (q >= a && q <= b) peak = std::max(peak, std::abs(state[i]));
    }
    const double cut = threshold * peak;
    std::size_t nodes = 0;
    int sign = 0;
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double q = grid.point(i);
        if (q < a || q > b || std::abs(state[i]) <= cut) continue;
        const int s = state[i] > 0.0 ? 1 : -1;
        if (sign != 0 && s != sign) ++nodes;
        sign = s;
    }
    return nodes;
}

DoubletReport find_doublets(const Spectrum& spectrum, std::span<const StateMetrics> metrics,
                            std::span<const NearDegeneracy> flagged, const WellGeometry& wells,
                            const DoubletCriteria& criteria) {
    if (!spectrum.has_states() || !spectrum.grid) {
        throw std::invalid_argument("find_doublets: spectrum carries no grid-normalized states");
    }
    const Grid& grid = *spectrum.grid;
    double tol = criteria.mirror_tolerance;
    if (!(tol > 0.0)) {
        tol = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < wells.minima.size(); ++i) {
            tol = std::min(tol, 0.5 * std::abs(wells.minima[i].q - wells.minima[i - 1].q));
        }
        if (!std::isfinite(tol)) tol = grid.h;
    }
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    const std::size_t central =
        (grid.q_min <= 0.0 && grid.q_max >= 0.0 && !wells.well_intervals.empty()) ? wells.well_of(0.0) : kNone;

    DoubletReport report;
    std::vector<double> plus(spectrum.dimension);
    std::vector<double> minus(spectrum.dimension);
    for (const NearDegeneracy& d : flagged) {
        const std::size_t hi = d.n;
        const std::size_t lo = d.n - 1;
        if (lo < 1 || hi > spectrum.size()) continue;
        auto reject = [&](std::string why) { report.rejected.push_back({lo, hi, d.spacing, std::move(why)}); };
        if (wells.well_intervals.size() < 2) {
            reject("single well");
            continue;
        }
        const auto a = spectrum.state(lo - 1);
        const auto b = spectrum.state(hi - 1);
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        for (std::size_t i = 0; i < spectrum.dimension; ++i) {
            plus[i] = inv_sqrt2 * (a[i] + b[i]);
            minus[i] = inv_sqrt2 * (a[i] - b[i]);
        }
        const StateMetrics mp = state_metrics(plus, lo, grid, wells);
        const StateMetrics mm = state_metrics(minus, hi, grid, wells);
        if (mp.dominant_well == mm.dominant_well) {
            reject("combinations share one well");
            continue;
        }
        if (mp.dominant_well == central || mm.dominant_well == central) {
            reject("central well");
            continue;
        }
        const auto mirror = wells.mirror_of(mp.dominant_well, tol);
        if (!mirror || *mirror != mm.dominant_well) {
            reject("wells are not a mirror pair");
            continue;
        }
        const double loc = std::min(mp.localization, mm.localization);
        if (!(loc > criteria.min_localization)) {
            reject("weak localization");
            continue;
        }
        Doublet out;
        out.n_lo = lo;
        out.n_hi = hi;
        out.splitting = d.spacing;
        const bool plus_left = wells.minima[mp.dominant_well].q < wells.minima[mm.dominant_well].q;
        out.left_well = plus_left ? mp.dominant_well : mm.dominant_well;
        out.right_well = plus_left ? mm.dominant_well : mp.dominant_well;
        if (lo - 1 < metrics.size()) out.parity_lo = metrics[lo - 1].parity_overlap;
        if (hi - 1 < metrics.size()) out.parity_hi = metrics[hi - 1].parity_overlap;
        out.localization = loc;
        const auto [wa, wb] = wells.well_intervals[mp.dominant_well];
        out.series = 1 + count_nodes(plus, grid, wa, wb, criteria.node_threshold);
        report.doublets.push_back(out);
    }
    return report;
}

std::vector<SeriesOnset> series_onsets(std::span<const Doublet> doublets, const SpacingAnalysis& analysis,
                                       std::size_t window, double depth) {
    const std::vector<double> medians = window_medians(analysis, window);
    std::vector<SeriesOnset> out;
    for (const Doublet& d : doublets) {
        const std::size_t i = d.n_hi - 2;
        if (i >= medians.size() || !(d.splitting < depth * medians[i])) continue;
        const bool seen = std::any_of(out.begin(), out.end(), [&](const SeriesOnset& o) { return o.series == d.series; });
        if (!seen) out.push_back({d.series, d.n_lo, d.n_hi});
    }
    std::sort(out.begin(), out.end(), [](const SeriesOnset& a, const SeriesOnset& b) { return a.series < b.series; });
    return out;
}

}  // namespace superexp
