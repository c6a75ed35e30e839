#include "superexp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace superexp {

DenseEigen dense_eigensolve(const BandMatrix& matrix) {
    const std::size_t n = matrix.order();
    if (n > 1000) throw std::invalid_argument("dense_eigensolve: order above 1000");
    std::vector<double> a(n * n, 0.0);
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        v[i * n + i] = 1.0;
        for (std::size_t j = 0; j < n; ++j) a[j * n + i] = matrix(i, j);
    }
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[j * n + i]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                total += A(i, j) * A(i, j);
                if (i != j) off += A(i, j) * A(i, j);
            }
        }
        if (off <= 1e-30 * total) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A(k, p);
                    const double akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A(p, k);
                    const double aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[p * n + k];
                    const double vkq = v[q * n + k];
                    v[p * n + k] = c * vkp - s * vkq;
                    v[q * n + k] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return A(x, x) < A(y, y); });
    DenseEigen out;
    out.order = n;
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = A(order[j], order[j]);
        std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(order[j] * n), n,
                    out.vectors.begin() + static_cast<std::ptrdiff_t>(j * n));
    }
    return out;
}

std::vector<double> analytic_energies(AnalyticCase which, std::size_t count, double width) {
    std::vector<double> e(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double n = static_cast<double>(k + 1);
        if (which == AnalyticCase::HarmonicOscillator) {
            e[k] = n - 0.5;
        } else {
            if (!(width > 0.0)) throw std::invalid_argument("analytic_energies: width must be positive");
            e[k] = n * n * std::numbers::pi * std::numbers::pi / (2.0 * width * width);
        }
    }
    return e;
}

double analytic_state(AnalyticCase which, std::size_t n, double q, double width) {
    if (n == 0) throw std::invalid_argument("analytic_state: n is 1-based");
    if (which == AnalyticCase::InfiniteWell) {
        if (!(width > 0.0)) throw std::invalid_argument("analytic_state: width must be positive");
        if (q <= 0.0 || q >= width) return 0.0;
        return std::sqrt(2.0 / width) * std::sin(static_cast<double>(n) * std::numbers::pi * q / width);
    }
    // Hermite recurrence on normalized functions avoids factorial overflow.
    const double g = std::exp(-0.5 * q * q) / std::pow(std::numbers::pi, 0.25);
    double prev = 0.0;
    double cur = g;
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double next = std::sqrt(2.0 / kk) * q * cur - std::sqrt((kk - 1.0) / kk) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace superexp
