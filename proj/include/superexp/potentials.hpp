#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace superexp {

/// Potential families. Every value is multiplied by the global prefactor `gamma`.
///
///   SSO          alpha |q|^q
///   ShiftedSSO   alpha (|q + 1/e|^(q + 1/e) - e^(-1/e))           minimum moved to (0, 0)
///   SkewedSSO    alpha |beta q|^(k q)                              `k` holds the skew exponent
///   RightSymSSO  alpha ((qm + |q|)^(qm + |q|) - qm^qm),              qm = 1/e
///   PowerLawSSO  alpha ((qm + |q|)^((qm + |q|)^beta) - qm^(qm^beta)), qm = e^(-1/beta)
///   OppCos       |q|^(alpha + beta cos(k q))
///   OppSin       |q|^(alpha + beta sin(k q))
///   OppPhase     |q|^(alpha + beta sin(k q + phi))
enum class Family { SSO, ShiftedSSO, SkewedSSO, RightSymSSO, PowerLawSSO, OppCos, OppSin, OppPhase };

struct PotentialSpec {
    Family family = Family::SSO;
    double alpha = 1.0;
    double beta = 0.0;
    double k = 0.0;
    double phi = 0.0;
    double gamma = 1.0;

    friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

using PotentialFn = std::function<double(double)>;

/// Lower-case identifier used in configuration files ("sso", "opp_cos", ...).
std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

bool is_opp(Family family);
bool is_sso_type(Family family);

/// Checks admissibility. Throws std::invalid_argument for hard violations
/// (alpha <= 0 for SSO-type families, gamma <= 0, k <= 0 for OPP, ...) and
/// returns warning-level diagnostics for parameters the family ignores.
std::vector<std::string> validate(const PotentialSpec& spec);

/// |x|^e = exp(e ln|x|) with the limits |0|^0 = 1 and |0|^e = 0 for e > 0.
/// Throws std::domain_error for |0|^e with e < 0.
double pow_abs(double x, double e);

double eval_potential(const PotentialSpec& spec, double q);

/// Callable view of a spec, for APIs that accept arbitrary potentials.
PotentialFn as_function(const PotentialSpec& spec);

/// V at the transition point of the SSO (q = 0 in unshifted coordinates).
/// Only defined for SSO and ShiftedSSO.
double transition_energy(const PotentialSpec& spec);

/// Position of the minimum of the confining envelope: 1/e for the SSO,
/// 1/(e beta) for the skewed SSO, and 0 for every other family.
double envelope_center(const PotentialSpec& spec);

/// True when V(q) = V(-q) holds for the family and parameters (OppPhase counts
/// when phi is an odd multiple of pi/2 to within 1e-12).
bool is_reflection_symmetric(const PotentialSpec& spec);

struct Extremum {
    double q;
    double value;
};

struct WellGeometry {
    std::vector<Extremum> minima;
    std::vector<Extremum> maxima;
    /// Intervals between consecutive maxima; the outermost ones end at the domain edges.
    std::vector<std::pair<double, double>> well_intervals;

    /// Index of the interval containing q (nearest interval when q lies outside all of them).
    std::size_t well_of(double q) const;
    /// Index of the well whose minimum is closest to -q_min(well), if any lies within `tol`.
    std::optional<std::size_t> mirror_of(std::size_t well, double tol) const;
};

/// Finds every local extremum of V on [q_min, q_max] from sign changes of a
/// sampled slope, refined by bisection on the slope sign to 1e-10 in q.
/// `resolution` is the number of samples over the domain.
WellGeometry locate_wells(const PotentialFn& v, double q_min, double q_max, std::size_t resolution);
WellGeometry locate_wells(const PotentialSpec& spec, double q_min, double q_max, std::size_t resolution);

}  // namespace superexp
