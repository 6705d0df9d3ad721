#include "phaseq/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace phaseq {

std::string to_string(AxesKind kind) {
    switch (kind) {
        case AxesKind::position_momentum: return "position-momentum";
        case AxesKind::energy_time: return "energy-time";
        case AxesKind::angle_angular_momentum: return "angle-angular-momentum";
    }
    return "unknown";
}

std::vector<double> simpson_coefficients(std::size_t count) {
    if (count < 9)
        throw domain_error("integration grid is degenerate (count < 9)");
    std::vector<double> c(count, 0.0);
    // Largest odd prefix takes Simpson; an even tail point adds one trapezoid
    // panel. Coefficients are exact integers; the h/6 scale is applied by the
    // caller in one place.
    const std::size_t n_simpson = (count % 2 == 1) ? count : count - 1;
    c[0] += 2.0;
    c[n_simpson - 1] += 2.0;
    for (std::size_t i = 1; i + 1 < n_simpson; ++i) c[i] += (i % 2 == 1) ? 8.0 : 4.0;
    if (count % 2 == 0) {
        c[count - 2] += 3.0;
        c[count - 1] += 3.0;
    }
    return c;
}

namespace {

template <typename T>
T integrate_impl(const Field<T>& f) {
    const Grid1D& ga = f.grid.axis_a;
    const Grid1D& gb = f.grid.axis_b;
    const std::vector<double> ca = simpson_coefficients(ga.count);
    const std::vector<double> cb = simpson_coefficients(gb.count);

    std::vector<T> row_totals(ga.count);
    std::vector<T> scratch(gb.count);
    for (std::size_t ia = 0; ia < ga.count; ++ia) {
        for (std::size_t ib = 0; ib < gb.count; ++ib)
            scratch[ib] = cb[ib] * f.at(ia, ib);
        row_totals[ia] = ca[ia] * pairwise_sum(scratch);
    }
    return pairwise_sum(row_totals) * ga.spacing() * gb.spacing() * (1.0 / 36.0);
}

} // namespace

double integrate_2d(const RealField& f) { return integrate_impl(f); }
std::complex<double> integrate_2d(const ComplexField& f) { return integrate_impl(f); }

double integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                    std::size_t count) {
    if (!(lo < hi)) throw domain_error("integrate_1d: lower bound must be below upper");
    const std::vector<double> c = simpson_coefficients(count);
    const double h = (hi - lo) / static_cast<double>(count - 1);
    std::vector<double> terms(count);
    for (std::size_t i = 0; i < count; ++i)
        terms[i] = c[i] * f(lo + static_cast<double>(i) * h);
    return pairwise_sum(terms) * h * (1.0 / 6.0);
}

namespace {

// One stencil row: true weight of node k is numer[k] / (12 h^order), with the
// node at sample index i + first_offset + k. All rows used here are exact
// multiples of 1/12, so the numerators are stored as exact integers.
struct StencilRow {
    int first_offset;
    std::vector<double> numer;
};

StencilRow make_row(int first_offset, int node_count, int order) {
    std::vector<double> offsets(node_count);
    for (int k = 0; k < node_count; ++k)
        offsets[k] = static_cast<double>(first_offset + k);
    const std::vector<double> w = fd_weights(0.0, offsets, order);
    StencilRow row{first_offset, std::vector<double>(node_count)};
    for (int k = 0; k < node_count; ++k) {
        const double scaled = w[k] * 12.0;
        const double rounded = std::round(scaled);
        if (std::abs(scaled - rounded) > 1e-6)
            throw numeric_error("finite-difference stencil generation failed");
        row.numer[k] = rounded;
    }
    return row;
}

struct StencilSet {
    StencilRow interior;                 // centred
    std::vector<StencilRow> at_start;    // rows for i = 0, 1
    std::vector<StencilRow> at_end;      // rows for i = n-2, n-1
};

StencilSet make_stencils(int order) {
    StencilSet s{make_row(-2, 5, order), {}, {}};
    if (order == 1) {
        s.at_start = {make_row(0, 5, order), make_row(-1, 5, order)};
        s.at_end = {make_row(-3, 5, order), make_row(-4, 5, order)};
    } else {
        s.at_start = {make_row(0, 6, order), make_row(-1, 6, order)};
        s.at_end = {make_row(-4, 6, order), make_row(-5, 6, order)};
    }
    return s;
}

// Applies `row` at position i of a line of n samples with stride `stride`,
// reading from base[offset_of_line]. Subtracting the centre sample first makes
// the result exactly zero on constant input (the numerators sum to zero).
template <typename T>
T apply_row(const T* line, std::ptrdiff_t stride, std::size_t i, const StencilRow& row) {
    const T centre = line[static_cast<std::ptrdiff_t>(i) * stride];
    T acc{};
    for (std::size_t k = 0; k < row.numer.size(); ++k) {
        const std::ptrdiff_t j =
            static_cast<std::ptrdiff_t>(i) + row.first_offset + static_cast<std::ptrdiff_t>(k);
        acc += row.numer[k] * (line[j * stride] - centre);
    }
    return acc;
}

template <typename T>
T apply_row_periodic(const T* line, std::ptrdiff_t stride, std::size_t i,
                     const StencilRow& row, std::size_t period) {
    const T centre = line[static_cast<std::ptrdiff_t>(i % period) * stride];
    T acc{};
    for (std::size_t k = 0; k < row.numer.size(); ++k) {
        std::ptrdiff_t j =
            static_cast<std::ptrdiff_t>(i) + row.first_offset + static_cast<std::ptrdiff_t>(k);
        j = ((j % static_cast<std::ptrdiff_t>(period)) + static_cast<std::ptrdiff_t>(period)) %
            static_cast<std::ptrdiff_t>(period);
        acc += row.numer[k] * (line[j * stride] - centre);
    }
    return acc;
}

template <typename T>
Field<T> derivative_impl(const Field<T>& f, Axis axis, int order) {
    if (order != 1 && order != 2)
        throw domain_error("partial_derivative: order must be 1 or 2");
    static const StencilSet first = make_stencils(1);
    static const StencilSet second = make_stencils(2);
    const StencilSet& s = (order == 1) ? first : second;

    const Grid1D& ax = axis_of(f.grid, axis);
    const double h = ax.spacing();
    const double scale = (order == 1) ? 1.0 / (12.0 * h) : 1.0 / (12.0 * h * h);
    const std::size_t n = ax.count;

    const std::size_t n_lines = (axis == Axis::a) ? f.grid.axis_b.count : f.grid.axis_a.count;
    const std::ptrdiff_t stride =
        (axis == Axis::a) ? static_cast<std::ptrdiff_t>(f.grid.axis_b.count) : 1;
    const std::ptrdiff_t line_stride =
        (axis == Axis::a) ? 1 : static_cast<std::ptrdiff_t>(f.grid.axis_b.count);

    Field<T> out(f.grid);
    for (std::size_t line = 0; line < n_lines; ++line) {
        const T* src = f.values.data() + static_cast<std::ptrdiff_t>(line) * line_stride;
        T* dst = out.values.data() + static_cast<std::ptrdiff_t>(line) * line_stride;
        if (ax.periodic) {
            const std::size_t period = n - 1;
            for (std::size_t i = 0; i < n; ++i)
                dst[static_cast<std::ptrdiff_t>(i) * stride] =
                    scale * apply_row_periodic(src, stride, i, s.interior, period);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const StencilRow* row = &s.interior;
                if (i < 2)
                    row = &s.at_start[i];
                else if (i >= n - 2)
                    row = &s.at_end[i - (n - 2)];
                dst[static_cast<std::ptrdiff_t>(i) * stride] =
                    scale * apply_row(src, stride, i, *row);
            }
        }
    }
    return out;
}

} // namespace

RealField partial_derivative(const RealField& f, Axis axis, int order) {
    return derivative_impl(f, axis, order);
}

ComplexField partial_derivative(const ComplexField& f, Axis axis, int order) {
    return derivative_impl(f, axis, order);
}

std::vector<double> fd_weights(double z, std::span<const double> nodes, int m) {
    const int n = static_cast<int>(nodes.size());
    if (m < 0 || n < m + 1)
        throw domain_error("fd_weights: need at least m + 1 nodes");
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = c[i][m];
    return out;
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double tol) {
    if (!(lo < hi)) throw domain_error("find_root_bracketed: invalid interval");
    if (!(tol > 0.0)) throw domain_error("find_root_bracketed: tolerance must be positive");
    double flo = f(lo);
    double fhi = f(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi))
        throw numeric_error("find_root_bracketed: non-finite function value");
    if (std::abs(flo) <= tol) return lo;
    if (std::abs(fhi) <= tol) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw domain_error("find_root_bracketed: interval does not bracket a sign change");

    // Illinois-damped false position: superlinear on smooth roots, and the
    // retained endpoint is down-weighted so the bracket always shrinks.
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (!std::isfinite(fx))
            throw numeric_error("find_root_bracketed: non-finite function value");
        if (std::abs(fx) <= tol) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == +1) flo *= 0.5;
            side = +1;
        }
        if (hi - lo <= tol * std::max(1.0, std::abs(x))) return 0.5 * (lo + hi);
    }
    throw numeric_error("find_root_bracketed: no convergence in 200 iterations");
}

} // namespace phaseq
