#include "superexp/spectral_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "superexp/eigensolver.hpp"

namespace superexp {
namespace {

int trend(double next, double cur) {
    const double diff = next - cur;
    const double scale = std::max(std::abs(next), std::abs(cur));
    if (std::abs(diff) <= 1e-14 * scale) return 0;
    return diff > 0.0 ? 1 : -1;
}

}  // namespace

SpacingAnalysis spacings(std::span<const double> energies) {
    if (energies.size() < 3) throw std::invalid_argument("spacings: need at least 3 energies");
    SpacingAnalysis a;
    a.floor = spacing_floor(energies);
    const std::size_t m = energies.size();
    a.spacings.resize(m - 1);
    a.degenerate_flags.resize(m - 1);
    for (std::size_t i = 1; i < m; ++i) {
        const double d = energies[i] - energies[i - 1];
        if (d < 0.0) throw std::invalid_argument("spacings: energies must be sorted ascending");
        a.spacings[i - 1] = d;
        a.degenerate_flags[i - 1] = d < a.floor;
    }
    a.scaled.resize(m - 2);
    for (std::size_t i = 0; i + 1 < a.spacings.size(); ++i) {
        if (!a.degenerate_flags[i]) a.scaled[i] = a.spacings[i + 1] / a.spacings[i];
    }
    return a;
}

SpacingAnalysis analyze_spectrum(std::span<const double> energies) {
    SpacingAnalysis a = spacings(energies);
    if (a.spacings.size() >= 3) {
        TurningPoints tp = turning_points(a.spacings, 2);
        a.turning_indices = std::move(tp.indices);
        a.tp_counts = std::move(tp.counts);
    }
    return a;
}

TurningPoints turning_points(std::span<const double> s, std::size_t first_label) {
    if (s.size() < 3) throw std::invalid_argument("turning_points: need at least 3 spacings");
    TurningPoints tp;
    int previous = trend(s[1], s[0]);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        int next = trend(s[i + 1], s[i]);
        if (next == 0) next = previous;
        if (previous != 0 && next != 0 && next != previous) tp.indices.push_back(first_label + i);
        if (next != 0) previous = next;
    }
    for (std::size_t i = 1; i < tp.indices.size(); ++i) tp.counts.push_back(tp.indices[i] - tp.indices[i - 1]);
    return tp;
}

std::vector<std::size_t> reconstruct_turning_indices(std::size_t first, std::span<const std::size_t> counts) {
    std::vector<std::size_t> out{first};
    for (std::size_t c : counts) out.push_back(out.back() + c);
    return out;
}

std::map<std::size_t, std::size_t> histogram(std::span<const std::size_t> values) {
    std::map<std::size_t, std::size_t> h;
    for (std::size_t v : values) ++h[v];
    return h;
}

PowerLawFit fit_power_law(std::span<const double> energies, std::size_t n_lo, std::size_t n_hi) {
    if (n_lo < 1 || n_hi > energies.size() || n_hi < n_lo + 10) {
        throw std::invalid_argument("fit_power_law: need 1 <= n_lo, n_hi - n_lo >= 10, n_hi <= number of states");
    }
    const auto count = static_cast<double>(n_hi - n_lo + 1);
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        const double e = energies[n - 1];
        if (!(e > 0.0)) {
            throw std::invalid_argument("fit_power_law: E_" + std::to_string(n) + " is not positive");
        }
        mx += std::log(static_cast<double>(n));
        my += std::log(e);
    }
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        const double dx = std::log(static_cast<double>(n)) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(energies[n - 1]) - my);
    }
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    fit.n_lo = n_lo;
    fit.n_hi = n_hi;
    double ss = 0.0;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        const double r = std::log(energies[n - 1]) - intercept - fit.exponent * std::log(static_cast<double>(n));
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / count);
    return fit;
}

std::pair<double, double> fit_sensitivity(std::span<const double> energies, std::size_t n_lo, std::size_t n_hi,
                                          std::size_t shift) {
    const std::size_t down = std::min(shift, n_lo - 1);
    const std::size_t up = std::min(shift, energies.size() - n_hi);
    return {fit_power_law(energies, n_lo - down, n_hi - down).exponent,
            fit_power_law(energies, n_lo + up, n_hi + up).exponent};
}

std::vector<double> window_medians(const SpacingAnalysis& analysis, std::size_t window) {
    if (window < 5 || window % 2 == 0) throw std::invalid_argument("near_degeneracies: window must be odd and >= 5");
    const auto& s = analysis.spacings;
    const std::size_t count = s.size();
    const std::size_t width = std::min(window, count);
    std::vector<double> out(count);
    std::vector<double> buf;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t lo = i >= window / 2 ? i - window / 2 : 0;
        lo = std::min(lo, count - width);
        buf.assign(s.begin() + static_cast<std::ptrdiff_t>(lo), s.begin() + static_cast<std::ptrdiff_t>(lo + width));
        const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(width / 2);
        std::nth_element(buf.begin(), mid, buf.end());
        double median = *mid;
        if (width % 2 == 0) median = 0.5 * (median + *std::max_element(buf.begin(), mid));
        out[i] = median;
    }
    return out;
}

std::vector<NearDegeneracy> near_degeneracies(const SpacingAnalysis& analysis, const DegeneracyOptions& opts) {
    if (!(opts.factor > 0.0 && opts.factor < 1.0)) throw std::invalid_argument("near_degeneracies: factor must lie in (0, 1)");
    const std::vector<double> medians = window_medians(analysis, opts.window);
    std::vector<NearDegeneracy> out;
    for (std::size_t i = 0; i < analysis.spacings.size(); ++i) {
        if (analysis.spacings[i] < opts.factor * medians[i]) out.push_back({i + 2, analysis.spacings[i]});
    }
    return out;
}

}  // namespace superexp
