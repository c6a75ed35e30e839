#include "superexp/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace superexp {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
constexpr double kRefineTolerance = 1e-10;

struct FamilyInfo {
    Family family;
    std::string_view name;
    bool uses_beta;
    bool uses_k;
    bool uses_phi;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::SSO, "sso", false, false, false},
    {Family::ShiftedSSO, "shifted_sso", false, false, false},
    {Family::SkewedSSO, "skewed_sso", true, true, false},
    {Family::RightSymSSO, "right_sym_sso", false, false, false},
    {Family::PowerLawSSO, "power_law_sso", true, false, false},
    {Family::OppCos, "opp_cos", true, true, false},
    {Family::OppSin, "opp_sin", true, true, false},
    {Family::OppPhase, "opp_phase", true, true, true},
};

const FamilyInfo& info(Family family) {
    for (const auto& f : kFamilies) {
        if (f.family == family) return f;
    }
    throw std::invalid_argument("unknown potential family");
}

// Oscillating part of the OPP exponent and its derivative.
double opp_trig(const PotentialSpec& s, double q) {
    switch (s.family) {
        case Family::OppCos: return std::cos(s.k * q);
        case Family::OppSin: return std::sin(s.k * q);
        default: return std::sin(s.k * q + s.phi);
    }
}

double opp_trig_derivative(const PotentialSpec& s, double q) {
    switch (s.family) {
        case Family::OppCos: return -s.k * std::sin(s.k * q);
        case Family::OppSin: return s.k * std::cos(s.k * q);
        default: return s.k * std::cos(s.k * q + s.phi);
    }
}

double power_law_qm(double beta) { return std::exp(-1.0 / beta); }

double sign_of(double q) { return q > 0.0 ? 1.0 : (q < 0.0 ? -1.0 : 0.0); }

// Analytic slope; only its sign matters to the extremum search, so the
// singular points return signed infinities or zero.
double eval_derivative(const PotentialSpec& s, double q) {
    const double scale = s.gamma * s.alpha;
    switch (s.family) {
        case Family::SSO:
        case Family::ShiftedSSO: {
            const double x = s.family == Family::SSO ? q : q + kInvE;
            if (x == 0.0) return -std::numeric_limits<double>::infinity();
            return scale * pow_abs(x, x) * (std::log(std::abs(x)) + 1.0);
        }
        case Family::SkewedSSO: {
            const double bx = s.beta * q;
            if (bx == 0.0) return -std::numeric_limits<double>::infinity();
            return scale * pow_abs(bx, s.k * q) * s.k * (std::log(std::abs(bx)) + 1.0);
        }
        case Family::RightSymSSO: {
            const double x = kInvE + std::abs(q);
            return scale * std::pow(x, x) * (std::log(x) + 1.0) * sign_of(q);
        }
        case Family::PowerLawSSO: {
            const double x = power_law_qm(s.beta) + std::abs(q);
            const double g = std::pow(x, s.beta);
            return scale * std::pow(x, g) * std::pow(x, s.beta - 1.0) * (s.beta * std::log(x) + 1.0) *
                   sign_of(q);
        }
        case Family::OppCos:
        case Family::OppSin:
        case Family::OppPhase: {
            if (q == 0.0) return 0.0;
            const double f = s.alpha + s.beta * opp_trig(s, q);
            const double v = s.gamma * pow_abs(q, f);
            return v * (s.beta * opp_trig_derivative(s, q) * std::log(std::abs(q)) + f / q);
        }
    }
    return 0.0;
}

int slope_sign(const std::function<double(double)>& slope, double q) {
    const double d = slope(q);
    return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
}

WellGeometry locate_with_slope(const PotentialFn& v, const std::function<double(double)>& slope,
                               double q_min, double q_max, std::size_t resolution) {
    if (!(q_max > q_min)) throw std::invalid_argument("locate_wells: empty domain");
    if (resolution < 3) throw std::invalid_argument("locate_wells: resolution must be >= 3");

    const double step = (q_max - q_min) / static_cast<double>(resolution - 1);
    std::vector<int> signs(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        signs[i] = slope_sign(slope, q_min + step * static_cast<double>(i));
    }

    struct Raw {
        double q;
        bool is_min;
    };
    std::vector<Raw> raw;
    int last = 0;
    double last_q = q_min;
    for (std::size_t i = 0; i < resolution; ++i) {
        const double q = q_min + step * static_cast<double>(i);
        const int s = signs[i];
        if (s == 0) continue;
        if (last != 0 && s != last) {
            // Slope changed sign somewhere in [last_q, q]; bisect on the sign.
            double a = last_q;
            double b = q;
            while (b - a > kRefineTolerance) {
                const double mid = 0.5 * (a + b);
                const int sm = slope_sign(slope, mid);
                if (sm == 0) {
                    a = b = mid;
                    break;
                }
                if (sm == last) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            raw.push_back({0.5 * (a + b), last < 0});
        }
        last = s;
        last_q = q;
    }

    WellGeometry geo;
    for (const auto& r : raw) {
        (r.is_min ? geo.minima : geo.maxima).push_back({r.q, v(r.q)});
    }
    // One interval per minimum, bounded by the neighbouring maxima or the domain edges.
    for (std::size_t i = 0; i < geo.minima.size(); ++i) {
        const double qm = geo.minima[i].q;
        double left = q_min;
        double right = q_max;
        for (const auto& mx : geo.maxima) {
            if (mx.q < qm) left = std::max(left, mx.q);
            if (mx.q > qm) right = std::min(right, mx.q);
        }
        if (i == 0) left = q_min;
        if (i + 1 == geo.minima.size()) right = q_max;
        geo.well_intervals.emplace_back(left, right);
    }
    return geo;
}

}  // namespace

std::string_view family_name(Family family) { return info(family).name; }

std::optional<Family> parse_family(std::string_view name) {
    for (const auto& f : kFamilies) {
        if (f.name == name) return f.family;
    }
    return std::nullopt;
}

bool is_opp(Family family) {
    return family == Family::OppCos || family == Family::OppSin || family == Family::OppPhase;
}

bool is_sso_type(Family family) { return !is_opp(family); }

std::vector<std::string> validate(const PotentialSpec& spec) {
    const auto& fi = info(spec.family);
    const std::string name(fi.name);
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(spec.alpha) || !finite(spec.beta) || !finite(spec.k) || !finite(spec.phi) ||
        !finite(spec.gamma)) {
        throw std::invalid_argument(name + ": parameters must be finite");
    }
    if (!(spec.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (!(spec.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");

    switch (spec.family) {
        case Family::SkewedSSO:
            if (!(spec.beta > 0.0)) throw std::invalid_argument("skewed_sso: beta must be positive");
            if (!(spec.k > 0.0)) throw std::invalid_argument("skewed_sso: skew exponent k must be positive");
            break;
        case Family::PowerLawSSO:
            if (!(spec.beta > 0.0)) throw std::invalid_argument("power_law_sso: beta must be positive");
            break;
        case Family::OppCos:
        case Family::OppSin:
        case Family::OppPhase:
            if (!(spec.k > 0.0)) throw std::invalid_argument(name + ": k must be positive");
            // Keeps the exponent positive everywhere, so V(0) = 0 stays finite.
            if (!(spec.alpha > std::abs(spec.beta))) {
                throw std::invalid_argument(name + ": alpha must exceed |beta|");
            }
            break;
        default: break;
    }

    std::vector<std::string> warnings;
    if (!fi.uses_beta && spec.beta != 0.0) warnings.push_back(name + " ignores beta");
    if (!fi.uses_k && spec.k != 0.0) warnings.push_back(name + " ignores k");
    if (!fi.uses_phi && spec.phi != 0.0) warnings.push_back(name + " ignores phi");
    return warnings;
}

double pow_abs(double x, double e) {
    const double ax = std::abs(x);
    if (ax == 0.0) {
        if (e == 0.0) return 1.0;
        if (e > 0.0) return 0.0;
        throw std::domain_error("pow_abs: |0|^e diverges for e < 0");
    }
    return std::exp(e * std::log(ax));
}

double eval_potential(const PotentialSpec& s, double q) {
    double v = 0.0;
    switch (s.family) {
        case Family::SSO: v = s.alpha * pow_abs(q, q); break;
        case Family::ShiftedSSO: {
            const double x = q + kInvE;
            v = s.alpha * (pow_abs(x, x) - std::exp(-kInvE));
            break;
        }
        case Family::SkewedSSO: v = s.alpha * pow_abs(s.beta * q, s.k * q); break;
        case Family::RightSymSSO: {
            const double x = kInvE + std::abs(q);
            v = s.alpha * (pow_abs(x, x) - pow_abs(kInvE, kInvE));
            break;
        }
        case Family::PowerLawSSO: {
            const double qm = power_law_qm(s.beta);
            const double x = qm + std::abs(q);
            v = s.alpha * (pow_abs(x, pow_abs(x, s.beta)) - pow_abs(qm, pow_abs(qm, s.beta)));
            break;
        }
        case Family::OppCos:
        case Family::OppSin:
        case Family::OppPhase: v = pow_abs(q, s.alpha + s.beta * opp_trig(s, q)); break;
    }
    return s.gamma * v;
}

PotentialFn as_function(const PotentialSpec& spec) {
    return [spec](double q) { return eval_potential(spec, q); };
}

double transition_energy(const PotentialSpec& spec) {
    switch (spec.family) {
        case Family::SSO: return eval_potential(spec, 0.0);
        case Family::ShiftedSSO: return eval_potential(spec, -kInvE);
        default: throw std::invalid_argument("transition_energy: only defined for sso and shifted_sso");
    }
}

double envelope_center(const PotentialSpec& spec) {
    switch (spec.family) {
        case Family::SSO: return kInvE;
        case Family::SkewedSSO: return kInvE / spec.beta;
        default: return 0.0;
    }
}

bool is_reflection_symmetric(const PotentialSpec& spec) {
    switch (spec.family) {
        case Family::RightSymSSO:
        case Family::PowerLawSSO:
        case Family::OppCos: return true;
        case Family::OppPhase: {
            // sin(kq + phi) is even in q iff phi = pi/2 mod pi.
            const double r = std::remainder(spec.phi - std::numbers::pi / 2, std::numbers::pi);
            return std::abs(r) < 1e-12;
        }
        default: return false;
    }
}

std::size_t WellGeometry::well_of(double q) const {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < well_intervals.size(); ++i) {
        const auto [a, b] = well_intervals[i];
        if (q >= a && q <= b) return i;
        const double d = std::min(std::abs(q - a), std::abs(q - b));
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

std::optional<std::size_t> WellGeometry::mirror_of(std::size_t well, double tol) const {
    if (well >= minima.size()) return std::nullopt;
    const double target = -minima[well].q;
    std::optional<std::size_t> best;
    double best_dist = tol;
    for (std::size_t i = 0; i < minima.size(); ++i) {
        const double d = std::abs(minima[i].q - target);
        if (d <= best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

WellGeometry locate_wells(const PotentialFn& v, double q_min, double q_max, std::size_t resolution) {
    const double width = q_max - q_min;
    auto slope = [&v, width](double q) {
        const double d = 1e-7 * std::max(1.0, std::abs(q)) * std::min(1.0, width);
        return v(q + d) - v(q - d);
    };
    return locate_with_slope(v, slope, q_min, q_max, resolution);
}

WellGeometry locate_wells(const PotentialSpec& spec, double q_min, double q_max, std::size_t resolution) {
    validate(spec);
    auto v = as_function(spec);
    auto slope = [&spec](double q) { return eval_derivative(spec, q); };
    return locate_with_slope(v, slope, q_min, q_max, resolution);
}

}  // namespace superexp
