#pragma once

#include <cstddef>
#include <vector>

#include "superexp/discretization.hpp"

namespace superexp {

struct DenseEigen {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column-major, unit columns matching `values`
    std::size_t order = 0;
};

/// Full eigendecomposition by cyclic Jacobi rotations on the dense copy of
/// `matrix`. Meant as a reference for small problems (order <= 1000).
DenseEigen dense_eigensolve(const BandMatrix& matrix);

enum class AnalyticCase { HarmonicOscillator, InfiniteWell };

/// Exact continuum energies (n = 1, 2, ...): n - 1/2 for V = q^2/2, and
/// n^2 pi^2 / (2 L^2) for the infinite well of width L.
std::vector<double> analytic_energies(AnalyticCase which, std::size_t count, double width = 0.0);

/// Exact normalized eigenfunction n (1-based) at q. The infinite well spans [0, width].
double analytic_state(AnalyticCase which, std::size_t n, double q, double width = 0.0);

}  // namespace superexp
