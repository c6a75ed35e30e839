// Acceptance driver: one PASS/FAIL line per criterion. Tolerances are pinned
// below and must not be edited to make a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <unistd.h>

#include "superexp/eigensolver.hpp"
#include "superexp/oracles.hpp"
#include "superexp/pipeline.hpp"

using namespace superexp;
namespace fs = std::filesystem;

namespace tol {
constexpr double kHarmonicAbs = 1e-8;
constexpr double kBoxRel = 1e-8;
constexpr double kOracleSeconds = 30.0;
constexpr double kOrder = 8.0;
constexpr double kOrderBand = 0.3;
constexpr double kSsoFirst = 1.03;
constexpr double kSsoLast = 1.01;
constexpr double kSsoEnds = 0.005;
constexpr double kPlateauBand = 0.003;
constexpr std::size_t kRsoPeak = 18;
constexpr std::size_t kRsoPeakBand = 2;
constexpr double kAlternation = 0.90;
constexpr double kSublinearP = 0.26;
constexpr double kSublinearBand = 0.02;
constexpr double kLinearP = 0.72;
constexpr double kLinearBand = 0.03;
constexpr double kQuadraticP = 1.00;
constexpr double kQuadraticBand = 0.05;
constexpr double kTinySpacing = 1e-10;
constexpr double kOneTwoShare = 0.90;
constexpr double kThreeShare = 0.05;
constexpr double kParityMagnitude = 0.99;
constexpr double kSineLo = 1e-4;
constexpr double kSineHi = 1e-1;
constexpr double kSineShare = 0.95;
constexpr double kOneSided = 0.9;
constexpr double kGapContrast = 10.0;
constexpr double kEndpointRel = 1e-12;
constexpr double kQuarticLocalization = 0.95;
constexpr double kDenseRel = 1e-12;
}  // namespace tol

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

std::map<std::string, RunResults>& run_cache() {
    static std::map<std::string, RunResults> cache;
    return cache;
}

const RunResults& fixture(const std::string& figure, const std::string& name) {
    const std::string key = figure + "/" + name;
    auto& cache = run_cache();
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    for (const FigureRun& run : figure_runs(figure)) {
        if (run.name == name) return cache.emplace(key, run_config(run.config)).first->second;
    }
    throw std::runtime_error("no fixture " + key);
}

std::vector<double> ratios_of(const SpacingAnalysis& a, std::size_t n_first, std::size_t n_last) {
    std::vector<double> out;
    for (std::size_t n = n_first; n <= n_last; ++n) out.push_back(a.ratio(n).value());
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// 1. Analytic oracles.
Outcome ac1() {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid g = make_grid(-20.0, 20.0, 4001);
    const Spectrum s = solve_lowest(assemble_hamiltonian(g, [](double q) { return 0.5 * q * q; }), g, 100, false);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto exact = analytic_energies(AnalyticCase::HarmonicOscillator, 100);
    double ho_err = 0.0;
    for (std::size_t j = 0; j < 100; ++j) ho_err = std::max(ho_err, std::abs(s.energies[j] - exact[j]));

    // Walls at 0 and pi, one grid step outside the first and last nodes.
    const std::size_t cells = 400;
    const double width = std::numbers::pi;
    const double h = width / static_cast<double>(cells);
    const Grid box = make_grid(h, width - h, cells - 1);
    const std::size_t box_states = 20;
    const Spectrum b =
        solve_lowest(assemble_hamiltonian(box, [](double) { return 0.0; }, Closure::OddReflection), box, box_states, false);
    const auto box_exact = analytic_energies(AnalyticCase::InfiniteWell, box_states, width);
    double box_err = 0.0;
    for (std::size_t j = 0; j < box_states; ++j) {
        box_err = std::max(box_err, std::abs(b.energies[j] - box_exact[j]) / box_exact[j]);
    }
    const bool pass = ho_err <= tol::kHarmonicAbs && box_err <= tol::kBoxRel && seconds < tol::kOracleSeconds;
    return {pass, "harmonic max|dE| = " + fmt(ho_err, 3) + " (100 states, h = 0.01, " + fmt(seconds, 3) +
                      " s); box max rel err = " + fmt(box_err, 3) + " (20 states, h = pi/400)"};
}

// 2. Convergence order of the stencil.
Outcome ac2() {
    const std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
    const ConvergenceTable t = convergence_study([](double q) { return 0.5 * q * q; }, -20.0, 20.0, 10, hs);
    if (!t.fitted_order) return {false, "no resolved state to fit an order"};
    const double p = *t.fitted_order;
    return {std::abs(p - tol::kOrder) <= tol::kOrderBand,
            "fitted order " + fmt(p, 5) + " over h = 0.4, 0.2, 0.1, 0.05 (10 states)"};
}

// 3. Scaled spacings of the shifted SSO.
Outcome ac3() {
    std::string detail;
    bool pass = true;
    {
        const RunResults& r = fixture("fig1", "alpha_1000");
        const auto& a = *r.spacings;
        const auto v = ratios_of(a, 2, a.last_index() - 1);
        bool decreasing = true;
        for (std::size_t i = 1; i < v.size(); ++i) decreasing = decreasing && v[i] < v[i - 1];
        const bool ends = std::abs(v.front() - tol::kSsoFirst) <= tol::kSsoEnds &&
                          std::abs(v.back() - tol::kSsoLast) <= tol::kSsoEnds;
        pass = pass && decreasing && ends;
        detail += "alpha=1e3: dR_2.." + std::to_string(a.last_index() - 1) + " from " + fmt(v.front(), 5) + " to " +
                  fmt(v.back(), 5) + (decreasing ? ", monotone" : ", NOT monotone");
    }
    const std::pair<const char*, double> plateaus[] = {{"alpha_4000", 1.015}, {"alpha_10000", 1.010}, {"alpha_1e+05", 1.003}};
    for (auto [name, target] : plateaus) {
        const RunResults& r = fixture("fig1", name);
        const double et = transition_energy(r.config.potential);
        const auto& e = r.solution->spectrum.energies;
        // Ratio n involves E_{n+1}; keep those wholly below the transition.
        std::vector<double> v;
        for (std::size_t n = 2; n + 1 <= e.size() && e[n] < et; ++n) v.push_back(r.spacings->ratio(n).value());
        if (v.empty()) {
            pass = false;
            detail += std::string("; ") + name + ": no ratios below E_t";
            continue;
        }
        const double med = median(v);
        pass = pass && std::abs(med - target) <= tol::kPlateauBand;
        detail += std::string("; ") + name + ": plateau " + fmt(med, 5) + " over " + std::to_string(v.size()) +
                  " ratios (target " + fmt(target) + ")";
    }
    return {pass, detail};
}

// 4. Right-symmetrized SSO.
Outcome ac4() {
    bool pass = true;
    std::string detail;
    auto tail_monotone = [](const std::vector<double>& v, bool increasing) {
        for (std::size_t i = v.size() / 2 + 1; i < v.size(); ++i) {
            if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
        }
        return true;
    };
    for (const char* name : {"alpha_1", "alpha_10"}) {
        const auto& a = *fixture("fig2", name).spacings;
        const auto v = ratios_of(a, 2, a.last_index() - 1);
        const bool above = std::all_of(v.begin(), v.end(), [](double x) { return x > 1.0; });
        const bool ok = above && tail_monotone(v, false);
        pass = pass && ok;
        detail += std::string(name) + (ok ? " above 1 and falling" : " FAILS above-and-falling") + " (last " +
                  fmt(v.back(), 6) + "); ";
    }
    {
        const auto& a = *fixture("fig2", "alpha_1e+06").spacings;
        const auto v = ratios_of(a, 2, a.last_index() - 1);
        const bool below = std::all_of(v.begin(), v.end(), [](double x) { return x < 1.0; });
        const bool ok = below && tail_monotone(v, true);
        pass = pass && ok;
        detail += std::string("alpha_1e+06") + (ok ? " below 1 and rising" : " FAILS below-and-rising") + " (last " +
                  fmt(v.back(), 6) + "); ";
    }
    {
        const auto& a = *fixture("fig2", "alpha_1000").spacings;
        std::size_t crossing = 0;
        for (std::size_t n = 3; n < a.last_index(); ++n) {
            if (*a.ratio(n - 1) < 1.0 && *a.ratio(n) >= 1.0) crossing = n;
        }
        std::size_t peak = 0;
        double best = -1.0;
        for (std::size_t n = std::max<std::size_t>(crossing, 2); crossing && n < a.last_index(); ++n) {
            if (*a.ratio(n) > best) {
                best = *a.ratio(n);
                peak = n;
            }
        }
        const bool ok = crossing > 0 && peak + tol::kRsoPeakBand >= tol::kRsoPeak && peak <= tol::kRsoPeak + tol::kRsoPeakBand;
        pass = pass && ok;
        detail += "alpha_1000 crosses 1 at n = " + std::to_string(crossing) + ", maximum dR = " + fmt(best, 6) +
                  " at n = " + std::to_string(peak);
    }
    return {pass, detail};
}

// 5. Alternation for the power-law SSO with beta = 1/4.
Outcome ac5() {
    bool pass = true;
    std::string detail;
    for (const FigureRun& run : figure_runs("fig4")) {
        const auto& a = *fixture("fig4", run.name).spacings;
        const auto v = ratios_of(a, 2, a.last_index() - 1);
        std::size_t flips = 0;
        std::size_t total = 0;
        for (std::size_t i = 2; i < v.size(); ++i) {
            const double d0 = v[i - 1] - v[i - 2];
            const double d1 = v[i] - v[i - 1];
            ++total;
            if (d0 * d1 < 0.0) ++flips;
        }
        const double share = static_cast<double>(flips) / static_cast<double>(total);
        pass = pass && share >= tol::kAlternation;
        detail += run.name + " " + std::to_string(flips) + "/" + std::to_string(total) + "; ";
    }
    return {pass, detail};
}

// 6. Power-law exponents on n in [10, 250].
Outcome ac6() {
    const struct {
        const char* name;
        double target, band;
    } cases[] = {{"sublinear", tol::kSublinearP, tol::kSublinearBand},
                 {"linear", tol::kLinearP, tol::kLinearBand},
                 {"quadratic", tol::kQuadraticP, tol::kQuadraticBand}};
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        const RunResults& r = fixture("fig5", c.name);
        const PowerLawFit& f = r.fit.value();
        const bool ok = f.n_lo == 10 && f.n_hi == 250 && std::abs(f.exponent - c.target) <= c.band;
        pass = pass && ok;
        detail += std::string(c.name) + " p = " + fmt(f.exponent, 4) + " (want " + fmt(c.target) + " +- " +
                  fmt(c.band) + (ok ? ")" : ", OUT OF BAND)") + "; ";
    }
    return {pass, detail};
}

// 7. Sublinear cosine: tiny splittings, a second series, turning-point counts.
Outcome ac7() {
    const RunResults& r = fixture("fig5", "sublinear");
    const SpacingAnalysis& a = *r.spacings;
    std::size_t tiny = 0;
    std::size_t tiny_at_floor = 0;
    for (const NearDegeneracy& d : r.near_degeneracies) {
        if (d.n > 20 && d.spacing < tol::kTinySpacing) {
            ++tiny;
            if (a.degenerate_flags[d.n - 2]) ++tiny_at_floor;
        }
    }
    const auto onsets = series_onsets(r.doublets->doublets, a);
    const bool second = onsets.size() >= 2 && onsets[1].series == 2 && onsets[1].n_lo > 60 &&
                        onsets[0].n_lo < onsets[1].n_lo;

    const auto hist = histogram(a.tp_counts);
    const double total = static_cast<double>(a.tp_counts.size());
    auto share = [&](std::size_t v) { return hist.contains(v) ? static_cast<double>(hist.at(v)) / total : 0.0; };
    const double rest = 1.0 - share(1) - share(2) - share(3);
    const bool hist_ok = share(1) + share(2) >= tol::kOneTwoShare && share(3) > 0.0 && share(3) <= tol::kThreeShare &&
                         rest <= 0.0 + 1e-15;

    std::string h;
    for (auto [v, c] : hist) h += std::to_string(v) + ":" + std::to_string(c) + " ";
    std::string detail = std::to_string(tiny) + " flagged spacings below 1e-10 for n > 20 (" +
                         std::to_string(tiny_at_floor) + " under the floor " + fmt(a.floor, 3) + "); onsets";
    for (const auto& o : onsets) detail += " s" + std::to_string(o.series) + "@(" + std::to_string(o.n_lo) + "," + std::to_string(o.n_hi) + ")";
    detail += "; N(i) histogram " + h;
    return {tiny > 0 && second && hist_ok, detail};
}

// 8. Lowest doublets of the sublinear cosine potential.
Outcome ac8() {
    const RunResults& r = fixture("fig6", "cos_lowest21");
    const std::pair<std::size_t, std::size_t> expected[] = {{9, 10}, {13, 14}, {16, 17}, {20, 21}};
    const WellGeometry& w = *r.wells;
    double tol_mirror = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < w.minima.size(); ++i) tol_mirror = std::min(tol_mirror, 0.5 * (w.minima[i].q - w.minima[i - 1].q));
    bool pass = true;
    std::string detail;
    for (auto [lo, hi] : expected) {
        const auto it = std::find_if(r.doublets->doublets.begin(), r.doublets->doublets.end(),
                                     [&](const Doublet& d) { return d.n_lo == lo && d.n_hi == hi; });
        std::string tag = "(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
        if (it == r.doublets->doublets.end()) {
            pass = false;
            detail += tag + " missing; ";
            continue;
        }
        const double p0 = it->parity_lo.value();
        const double p1 = it->parity_hi.value();
        const bool parity = p0 * p1 < 0.0 && std::abs(p0) > tol::kParityMagnitude && std::abs(p1) > tol::kParityMagnitude;
        const bool mirror = w.mirror_of(it->left_well, tol_mirror) == it->right_well && it->left_well != it->right_well;
        pass = pass && parity && mirror;
        detail += tag + " P = " + fmt(p0, 5) + "/" + fmt(p1, 5) + " wells " + std::to_string(it->left_well) + "|" +
                  std::to_string(it->right_well) + (mirror ? "" : " NOT MIRROR") + "; ";
    }
    detail += std::to_string(r.doublets->doublets.size()) + " doublets in total";
    return {pass, detail};
}

// 9. Sine case: spacing range and one-sided states.
Outcome ac9() {
    const RunResults& r = fixture("fig7", "sin");
    const auto& s = r.spacings->spacings;
    const auto inside = std::count_if(s.begin(), s.end(), [](double d) { return d >= tol::kSineLo && d <= tol::kSineHi; });
    const double share = static_cast<double>(inside) / static_cast<double>(s.size());
    bool one_sided = true;
    std::string detail = std::to_string(inside) + "/" + std::to_string(s.size()) + " spacings in [1e-4, 1e-1]; |A|";
    for (std::size_t n : {10u, 12u, 14u, 16u}) {
        const double a = std::abs(r.metrics.at(n - 1).asymmetry);
        one_sided = one_sided && a > tol::kOneSided;
        detail += " " + std::to_string(n) + ":" + fmt(a, 4);
    }
    return {share >= tol::kSineShare && one_sided, detail};
}

// Several pairs close together at a reflection-symmetric phase, while an
// accidental avoided crossing closes only one gap. The measure is the
// geometric mean of the three smallest spacings.
double doublet_gap(const std::vector<double>& e) {
    std::vector<double> s;
    for (std::size_t i = 1; i < e.size(); ++i) s.push_back(e[i] - e[i - 1]);
    std::sort(s.begin(), s.end());
    return std::cbrt(s[0] * s[1] * s[2]);
}

std::size_t nearest(const std::vector<double>& values, double x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (std::abs(values[i] - x) < std::abs(values[best] - x)) best = i;
    }
    return best;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::abs(b[i]));
    return m;
}

// 10. Phase sweep.
Outcome ac10() {
    const FigureRun run = figure_runs("fig9").front();
    const RunResults r = run_config(run.config);
    const SweepResult& sw = *r.sweep;
    if (sw.failures > 0 || sw.points.size() != 128) return {false, "sweep incomplete"};
    std::vector<double> phi;
    std::vector<double> gap;
    for (const SweepPoint& p : sw.points) {
        phi.push_back(p.value);
        gap.push_back(doublet_gap(p.spectrum->energies));
    }
    const double pi = std::numbers::pi;
    const std::size_t i_half = nearest(phi, pi / 2);
    const std::size_t i_three = nearest(phi, 3 * pi / 2);
    const std::size_t mid = phi.size() / 2;
    const auto first_min = static_cast<std::size_t>(std::min_element(gap.begin(), gap.begin() + mid) - gap.begin());
    const auto second_min = static_cast<std::size_t>(std::min_element(gap.begin() + mid, gap.end()) - gap.begin());

    // Both grid points around pi count as "at pi".
    std::vector<std::size_t> reference{0, phi.size() - 1, mid - 1, mid};
    double ref_min = INFINITY;
    for (std::size_t i : reference) ref_min = std::min(ref_min, gap[i]);
    const double worst_dip = std::max(gap[i_half], gap[i_three]);
    const bool located = first_min == i_half && second_min == i_three;
    const bool contrast = ref_min >= tol::kGapContrast * worst_dip;

    SolveSettings settings = solve_settings(run.config);
    settings.want_states = false;
    PotentialSpec sine = run.config.potential;
    sine.family = Family::OppSin;
    PotentialSpec cosine = run.config.potential;
    cosine.family = Family::OppCos;
    PotentialSpec phase_c = run.config.potential;
    phase_c.phi = pi / 2;
    const auto es = solve_on_grid(sine, sw.grid, settings).spectrum.energies;
    const auto ec = solve_on_grid(cosine, sw.grid, settings).spectrum.energies;
    const auto epc = solve_on_grid(phase_c, sw.grid, settings).spectrum.energies;
    const double d0 = max_rel_diff(sw.points.front().spectrum->energies, es);
    const double d2pi = max_rel_diff(sw.points.back().spectrum->energies, es);
    const double dc = max_rel_diff(epc, ec);
    const bool endpoints = d0 <= tol::kEndpointRel && d2pi <= tol::kEndpointRel && dc <= tol::kEndpointRel;

    std::string detail = "gap minima at phi = " + fmt(phi[first_min], 5) + ", " + fmt(phi[second_min], 5) +
                         " (nearest grid points to pi/2, 3pi/2: " + fmt(phi[i_half], 5) + ", " + fmt(phi[i_three], 5) +
                         "); contrast " + fmt(ref_min / worst_dip, 4) + "x; endpoint rel diff " + fmt(d0, 2) + " / " +
                         fmt(d2pi, 2) + ", phase(pi/2) vs cosine " + fmt(dc, 2);
    return {located && contrast && endpoints, detail};
}

// 11. Series onsets of the quadratic case.
Outcome ac11() {
    const RunResults& r = fixture("fig11", "quadratic");
    const auto onsets = series_onsets(r.doublets->doublets, *r.spacings);
    std::string detail = "onsets";
    for (const auto& o : onsets) detail += " s" + std::to_string(o.series) + "@(" + std::to_string(o.n_lo) + "," + std::to_string(o.n_hi) + ")";
    if (onsets.size() < 3) return {false, detail};
    auto within = [](std::size_t n, std::size_t c, std::size_t band) { return n + band >= c && n <= c + band; };
    const bool pass = onsets[0].series == 1 && onsets[1].series == 2 && onsets[2].series == 3 &&
                      within(onsets[0].n_lo, 50, 5) && within(onsets[1].n_lo, 120, 10) && onsets[2].n_lo > 200;
    return {pass, detail};
}

// 12. Quartic doublets and their localization.
Outcome ac12() {
    const RunResults& r = fixture("fig12", "quartic");
    const std::vector<std::pair<std::size_t, std::size_t>> expected{{10, 11}, {15, 16}, {20, 21}, {34, 35}, {43, 44}};
    std::vector<std::pair<std::size_t, std::size_t>> found;
    std::string detail = "doublets";
    for (const Doublet& d : r.doublets->doublets) {
        found.emplace_back(d.n_lo, d.n_hi);
        detail += " (" + std::to_string(d.n_lo) + "," + std::to_string(d.n_hi) + ") L=" + fmt(d.localization, 4);
    }
    bool pass = found == expected;
    if (pass) {
        for (std::size_t i = found.size() - 2; i < found.size(); ++i) {
            pass = pass && r.doublets->doublets[i].localization > tol::kQuarticLocalization;
        }
    }
    return {pass, detail};
}

// 13. Band solver against the dense reference.
Outcome ac13() {
    std::mt19937_64 rng(20260101);
    std::uniform_int_distribution<std::size_t> order_dist(9, 400);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    std::size_t largest = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = order_dist(rng);
        largest = std::max(largest, n);
        BandMatrix m(n);
        const int kind = trial % 3;
        for (std::size_t k = 0; k <= BandMatrix::kHalfBandwidth; ++k) {
            auto d = m.diagonal(k);
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (kind == 0) {
                    d[i] = u(rng);
                } else if (kind == 1) {
                    // Graded: entries spanning several orders of magnitude.
                    d[i] = u(rng) * std::pow(10.0, 4.0 * static_cast<double>(i) / static_cast<double>(n));
                } else {
                    // Two decoupled halves with matching entries: exact double eigenvalues.
                    const std::size_t half = n / 2;
                    const std::size_t row = i + k;
                    const bool cross = (i < half) != (row < half);
                    d[i] = cross ? 0.0 : (i < half ? u(rng) : m.diagonal(k)[i - half]);
                }
            }
        }
        std::uniform_int_distribution<std::size_t> m_dist(1, n);
        const std::size_t want = m_dist(rng);
        const Spectrum s = solve_lowest(m, want, false);
        const DenseEigen ref = dense_eigensolve(m);
        for (std::size_t j = 0; j < want; ++j) {
            worst = std::max(worst, std::abs(s.energies[j] - ref.values[j]) / s.matrix_norm);
        }
    }
    return {worst <= tol::kDenseRel,
            "50 matrices up to order " + std::to_string(largest) + ": max |dE| / ||H|| = " + fmt(worst, 3)};
}

std::vector<fs::path> csv_files_under(const fs::path& root) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") out.push_back(fs::relative(e.path(), root));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 14. Byte-identical reproduce runs, the second with several sweep workers.
Outcome ac14() {
    const char* cli = std::getenv("SUPEREXP_CLI");
    if (!cli || !*cli) return {false, "SUPEREXP_CLI is not set"};
    const fs::path base = fs::temp_directory_path() / ("superexp_ac14_" + std::to_string(::getpid()));
    fs::remove_all(base);
    const std::string a = (base / "a").string();
    const std::string b = (base / "b").string();
    const std::string run_a = std::string("\"") + cli + "\" reproduce all -o \"" + a + "\" > /dev/null 2>&1";
    const std::string run_b = std::string("SUPEREXP_WORKERS=3 \"") + cli + "\" reproduce all -o \"" + b + "\" > /dev/null 2>&1";
    if (std::system(run_a.c_str()) != 0 || std::system(run_b.c_str()) != 0) {
        fs::remove_all(base);
        return {false, "reproduce exited with an error"};
    }
    const auto fa = csv_files_under(a);
    const auto fb = csv_files_under(b);
    std::size_t csv = 0;
    std::string mismatch;
    if (fa != fb) mismatch = "file lists differ";
    for (std::size_t i = 0; mismatch.empty() && i < fa.size(); ++i) {
        ++csv;
        if (read_bytes(fs::path(a) / fa[i]) != read_bytes(fs::path(b) / fb[i])) mismatch = fa[i].string() + " differs";
    }
    fs::remove_all(base);
    if (!mismatch.empty()) return {false, mismatch};
    return {csv > 0, std::to_string(csv) + " CSV files identical across two runs (1 and 3 workers)"};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<const char*, std::function<Outcome()>>> list{
        {"oracle accuracy", ac1},          {"finite difference order", ac2},
        {"shifted SSO scaled spacings", ac3}, {"right-symmetrized SSO", ac4},
        {"power-law SSO alternation", ac5},  {"power-law exponents", ac6},
        {"sublinear cosine degeneracies", ac7}, {"cosine doublets", ac8},
        {"sine spacings and asymmetry", ac9}, {"phase sweep", ac10},
        {"quadratic series onsets", ac11},   {"quartic doublets", ac12},
        {"band vs dense solver", ac13},      {"reproduce determinism", ac14},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::vector<int> only;
    app.add_option("--only", only, "Criterion numbers to run (default: all)")->check(CLI::Range(1, 14));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    const auto& list = criteria();
    for (std::size_t i = 0; i < list.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = list[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "AC" << id << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << list[i].first << ": " << o.detail
                  << " [" << fmt(sec, 3) << " s]" << std::endl;
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
