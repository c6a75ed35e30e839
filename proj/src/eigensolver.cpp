#include "superexp/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>

#include "superexp/error.hpp"

namespace superexp {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lower band storage with room for one bulge diagonal beyond the band.
class WorkBand {
public:
    WorkBand(const BandMatrix& m) : n_(m.order()), ld_(BandMatrix::kHalfBandwidth + 2), data_(n_ * ld_, 0.0) {
        for (std::size_t k = 0; k <= BandMatrix::kHalfBandwidth; ++k) {
            const auto diag = m.diagonal(k);
            for (std::size_t j = 0; j < diag.size(); ++j) at(j + k, j) = diag[j];
        }
    }

    // Requires i >= j and i - j < ld.
    double& at(std::size_t i, std::size_t j) { return data_[j * ld_ + (i - j)]; }

    std::size_t order() const { return n_; }

    // A <- G A G^T for the rotation G acting on rows/columns (p, p + 1),
    // with the current bandwidth d plus a single bulge diagonal.
    void rotate(std::size_t p, double c, double s, std::size_t d) {
        const std::size_t q = p + 1;
        const std::size_t first = p >= d ? p - d : 0;
        for (std::size_t j = first; j < p; ++j) {
            double& x = at(p, j);
            double& y = at(q, j);
            const double xv = x;
            const double yv = y;
            x = c * xv + s * yv;
            y = c * yv - s * xv;
        }
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double apq = at(q, p);
        const double cc = c * c;
        const double ss = s * s;
        const double cs = c * s;
        at(p, p) = cc * app + 2.0 * cs * apq + ss * aqq;
        at(q, q) = ss * app - 2.0 * cs * apq + cc * aqq;
        at(q, p) = cs * (aqq - app) + (cc - ss) * apq;
        const std::size_t last = std::min(n_ - 1, q + d);
        for (std::size_t j = q + 1; j <= last; ++j) {
            double& x = at(j, p);
            double& y = at(j, q);
            const double xv = x;
            const double yv = y;
            x = c * xv + s * yv;
            y = c * yv - s * xv;
        }
    }

private:
    std::size_t n_;
    std::size_t ld_;
    std::vector<double> data_;
};

// LU factorization with partial pivoting of (A - shift I) for a symmetric
// band matrix A, in LAPACK general-band layout.
class ShiftedBandLU {
public:
    static constexpr std::size_t kl = BandMatrix::kHalfBandwidth;
    static constexpr std::size_t ku = BandMatrix::kHalfBandwidth;
    static constexpr std::size_t kv = kl + ku;
    static constexpr std::size_t ld = 2 * kl + ku + 1;

    ShiftedBandLU(const BandMatrix& a, double shift, double tiny_pivot)
        : n_(a.order()), ab_(n_ * ld, 0.0), ipiv_(n_) {
        for (std::size_t k = 0; k <= kl; ++k) {
            const auto diag = a.diagonal(k);
            for (std::size_t j = 0; j < diag.size(); ++j) {
                const double v = k == 0 ? diag[j] - shift : diag[j];
                at(j + k, j) = v;
                if (k > 0) at(j, j + k) = v;
            }
        }
        factor(tiny_pivot);
    }

    void solve(std::span<double> b) const {
        const std::size_t n = n_;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const std::size_t km = std::min(kl, n - 1 - j);
            const std::size_t l = ipiv_[j];
            if (l != j) std::swap(b[l], b[j]);
            const double bj = b[j];
            if (bj != 0.0) {
                const double* col = &ab_[j * ld + kv];
                for (std::size_t r = 1; r <= km; ++r) b[j + r] -= col[r] * bj;
            }
        }
        for (std::size_t jj = n; jj-- > 0;) {
            const double* col = &ab_[jj * ld];
            b[jj] /= col[kv];
            const double bj = b[jj];
            if (bj == 0.0) continue;
            const std::size_t i0 = jj >= kv ? jj - kv : 0;
            for (std::size_t i = i0; i < jj; ++i) b[i] -= col[kv + i - jj] * bj;
        }
    }

private:
    double& at(std::size_t i, std::size_t j) { return ab_[j * ld + kv + i - j]; }

    void factor(double tiny_pivot) {
        const std::size_t n = n_;
        std::size_t ju = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t km = std::min(kl, n - 1 - j);
            double* col = &ab_[j * ld + kv];
            std::size_t jp = 0;
            double best = std::abs(col[0]);
            for (std::size_t r = 1; r <= km; ++r) {
                if (std::abs(col[r]) > best) {
                    best = std::abs(col[r]);
                    jp = r;
                }
            }
            ipiv_[j] = j + jp;
            if (col[jp] == 0.0) col[jp] = tiny_pivot;
            ju = std::max(ju, std::min(j + ku + jp, n - 1));
            if (jp != 0) {
                for (std::size_t c = j; c <= ju; ++c) std::swap(at(j, c), at(j + jp, c));
            }
            if (std::abs(col[0]) < tiny_pivot) col[0] = col[0] < 0.0 ? -tiny_pivot : tiny_pivot;
            if (km == 0) continue;
            const double inv = 1.0 / col[0];
            for (std::size_t r = 1; r <= km; ++r) col[r] *= inv;
            for (std::size_t c = j + 1; c <= ju; ++c) {
                const double t = at(j, c);
                if (t == 0.0) continue;
                double* target = &ab_[c * ld + kv + j - c];
                for (std::size_t r = 1; r <= km; ++r) target[r] -= col[r] * t;
            }
        }
    }

    std::size_t n_;
    std::vector<double> ab_;
    std::vector<std::size_t> ipiv_;
};

struct SturmData {
    const std::vector<double>& diag;
    std::vector<double> off2;
    double pivmin;
};

std::size_t count_below(const SturmData& s, double x) {
    const std::size_t n = s.diag.size();
    std::size_t count = 0;
    double q = s.diag[0] - x;
    if (std::abs(q) < s.pivmin) q = -s.pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        q = s.diag[i] - x - s.off2[i - 1] / q;
        if (std::abs(q) < s.pivmin) q = -s.pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

SturmData make_sturm(const Tridiagonal& t) {
    SturmData s{t.diagonal, {}, 0.0};
    s.off2.resize(t.off_diagonal.size());
    double max_off2 = 1.0;
    for (std::size_t i = 0; i < t.off_diagonal.size(); ++i) {
        s.off2[i] = t.off_diagonal[i] * t.off_diagonal[i];
        max_off2 = std::max(max_off2, s.off2[i]);
    }
    s.pivmin = std::numeric_limits<double>::min() * max_off2;
    return s;
}

double bisect_eigenvalue(const SturmData& s, std::size_t index, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double tol = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + s.pivmin;
        if (hi - lo <= tol) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count_below(s, mid) > index) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> lowest_eigenvalues(const Tridiagonal& t, std::size_t m, unsigned threads) {
    const std::size_t n = t.diagonal.size();
    const SturmData s = make_sturm(t);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(t.off_diagonal[i - 1]) : 0.0) +
                         (i + 1 < n ? std::abs(t.off_diagonal[i]) : 0.0);
        lo = std::min(lo, t.diagonal[i] - r);
        hi = std::max(hi, t.diagonal[i] + r);
    }
    const double widen = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) * static_cast<double>(n) + s.pivmin;
    lo -= widen;
    hi += widen;
    // Shared upper bracket for the requested window.
    if (m < n) {
        double a = lo;
        double b = hi;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (a + b);
            if (count_below(s, mid) >= m) {
                b = mid;
            } else {
                a = mid;
            }
        }
        hi = b;
    }

    std::vector<double> values(m);
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, m));
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t k = begin; k < m; k += stride) values[k] = bisect_eigenvalue(s, k, lo, hi);
    };
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }
    return values;
}

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double normalize(std::span<double> x) {
    const double nrm = std::sqrt(dot(x, x));
    if (nrm > 0.0) {
        const double inv = 1.0 / nrm;
        for (double& v : x) v *= inv;
    }
    return nrm;
}

void orthogonalize(std::span<double> x, const std::vector<double>& basis, std::size_t n, std::size_t first,
                   std::size_t last) {
    for (std::size_t j = first; j < last; ++j) {
        std::span<const double> v(basis.data() + j * n, n);
        const double c = dot(v, x);
        for (std::size_t i = 0; i < n; ++i) x[i] -= c * v[i];
    }
}

void fix_sign(std::span<double> x) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    }
    if (x[imax] < 0.0) {
        for (double& v : x) v = -v;
    }
}

}  // namespace

std::span<const double> Spectrum::state(std::size_t j) const {
    if (j >= energies.size() || state_data.empty()) throw std::out_of_range("Spectrum::state");
    return {state_data.data() + j * dimension, dimension};
}

std::span<double> Spectrum::state(std::size_t j) {
    if (j >= energies.size() || state_data.empty()) throw std::out_of_range("Spectrum::state");
    return {state_data.data() + j * dimension, dimension};
}

Tridiagonal reduce_to_tridiagonal(const BandMatrix& h) {
    const std::size_t n = h.order();
    WorkBand a(h);
    for (std::size_t d = BandMatrix::kHalfBandwidth; d >= 2; --d) {
        if (n <= d) continue;
        for (std::size_t k = 0; k + d < n; ++k) {
            // Annihilate A(k + d, k), then chase the bulge down the band.
            std::size_t col = k;
            std::size_t p = k + d - 1;
            while (p + 1 < n) {
                const double x = a.at(p, col);
                const double y = a.at(p + 1, col);
                if (y == 0.0) break;
                const double r = std::max(std::abs(x), std::abs(y)) < 1e150 ? std::sqrt(x * x + y * y) : std::hypot(x, y);
                a.rotate(p, x / r, y / r, d);
                a.at(p + 1, col) = 0.0;
                col = p;
                p += d;
            }
        }
    }
    Tridiagonal t;
    t.diagonal.resize(n);
    t.off_diagonal.resize(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) t.diagonal[i] = a.at(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) t.off_diagonal[i] = a.at(i + 1, i);
    return t;
}

std::size_t sturm_count(const Tridiagonal& t, double x) { return count_below(make_sturm(t), x); }

Spectrum solve_lowest(const BandMatrix& h, std::size_t m, bool want_states, const SolverOptions& opts) {
    const std::size_t n = h.order();
    if (m == 0 || m > n) throw std::invalid_argument("solve_lowest: need 1 <= m <= order");

    Spectrum out;
    out.matrix_norm = h.norm_inf();
    const Tridiagonal t = reduce_to_tridiagonal(h);
    out.energies = lowest_eigenvalues(t, m, opts.threads);
    for (double e : out.energies) {
        if (!std::isfinite(e)) throw SolverError("bisection produced a non-finite eigenvalue", 0);
    }
    if (!want_states) return out;

    const double norm = std::max(out.matrix_norm, std::numeric_limits<double>::min());
    const double tiny_pivot = kEps * norm;
    const double cluster_gap = opts.cluster_tol * norm;
    const double growth_target = 1.0 / (1e3 * std::sqrt(static_cast<double>(n)) * kEps * norm);

    out.dimension = n;
    out.state_data.assign(n * m, 0.0);
    out.residual_norms.assign(m, 0.0);
    std::vector<double> y(n);
    std::vector<double> hx(n);

    std::size_t cluster_start = 0;
    double previous_shift = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double e = out.energies[j];
        double shift = e;
        if (j > 0 && e - out.energies[j - 1] > cluster_gap) cluster_start = j;
        if (j > cluster_start) {
            // Numerically coincident shifts are separated so each solve picks a new direction.
            const double separation = 10.0 * kEps * std::max(std::abs(e), norm * 1e-3);
            if (shift - previous_shift < separation) shift = previous_shift + separation;
        }
        previous_shift = shift;

        const ShiftedBandLU lu(h, shift, tiny_pivot);
        std::span<double> x(out.state_data.data() + j * n, n);
        std::uint64_t seed = 0x5eed0000ull + j;
        for (double& v : x) v = static_cast<double>(splitmix(seed) >> 11) * 0x1.0p-53 - 0.5;
        normalize(x);

        bool converged = false;
        std::size_t extra = 0;
        for (std::size_t it = 0; it < opts.max_inverse_iterations; ++it) {
            orthogonalize(x, out.state_data, n, cluster_start, j);
            normalize(x);
            std::copy(x.begin(), x.end(), y.begin());
            lu.solve(y);
            const double growth = std::sqrt(dot(y, y));
            if (!std::isfinite(growth)) throw SolverError("inverse iteration diverged", j);
            std::copy(y.begin(), y.end(), x.begin());
            normalize(x);
            if (growth >= growth_target) {
                converged = true;
                if (++extra >= 2) break;
            }
        }
        orthogonalize(x, out.state_data, n, cluster_start, j);
        orthogonalize(x, out.state_data, n, cluster_start, j);
        normalize(x);
        fix_sign(x);

        h.multiply(x, hx);
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = hx[i] - e * x[i];
            r2 += r * r;
        }
        out.residual_norms[j] = std::sqrt(r2);
        if (!converged && out.residual_norms[j] > opts.rtol * norm) {
            throw SolverError("inverse iteration did not converge for state " + std::to_string(j + 1), j);
        }
    }
    return out;
}

Spectrum solve_lowest(const BandMatrix& h, const Grid& grid, std::size_t m, bool want_states,
                      const SolverOptions& opts) {
    if (grid.n_points != h.order()) throw std::invalid_argument("solve_lowest: grid does not match matrix order");
    Spectrum s = solve_lowest(h, m, want_states, opts);
    s.grid = grid;
    if (s.has_states()) {
        const double scale = 1.0 / std::sqrt(grid.h);
        for (double& v : s.state_data) v *= scale;
    }
    return s;
}

double spacing_floor(std::span<const double> energies) {
    double emax = 0.0;
    for (double e : energies) emax = std::max(emax, std::abs(e));
    return 1e-12 * emax;
}

double spacing_floor(const Spectrum& spectrum) { return spacing_floor(spectrum.energies); }

}  // namespace superexp
