#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "phaseq/field.hpp"
#include "phaseq/grid.hpp"

namespace phaseq {

// Deterministic pairwise reduction; the only summation order used anywhere.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 16) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v));
}

// Composite-Simpson coefficient row for a single axis, scaled so that the true
// quadrature weight of sample i is coefficients[i] * spacing / 6. Even sample
// counts get Simpson on the largest odd prefix plus one trapezoid panel.
std::vector<double> simpson_coefficients(std::size_t count);

// Tensor-product composite Simpson over the full grid, O(h^4).
double integrate_2d(const RealField& f);
std::complex<double> integrate_2d(const ComplexField& f);

// Composite Simpson for a callable on [lo, hi] sampled at `count` points.
double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                    std::size_t count);

// 4th-order finite-difference partial derivative along one axis.
// order: 1 or 2. Interior points use the central 5-point stencil (6-point for
// the 2nd-derivative boundary rows); the two boundary layers use one-sided
// stencils of the same order. Periodic axes wrap modulo (count - 1).
RealField partial_derivative(const RealField& f, Axis axis, int order);
ComplexField partial_derivative(const ComplexField& f, Axis axis, int order);

// Finite-difference weights for the m-th derivative at z from arbitrary nodes
// (Fornberg recurrence). Exposed for stencil verification.
std::vector<double> fd_weights(double z, std::span<const double> nodes, int m);

// Safeguarded secant/bisection on a bracketing interval [lo, hi] with
// f(lo) * f(hi) <= 0. Stops when |f(x)| <= tol or the bracket has shrunk to
// tol * max(1, |x|). Deterministic; at most 200 iterations.
double find_root_bracketed(const std::function<double(double)>& f, double lo,
                           double hi, double tol);

} // namespace phaseq
