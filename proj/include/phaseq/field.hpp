#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "phaseq/grid.hpp"

namespace phaseq {

// Scalar samples over a PhaseGrid, row-major with axis_a as the slow index:
// index(ia, ib) = ia * axis_b.count + ib.
template <typename T>
struct Field {
    PhaseGrid grid;
    std::vector<T> values;

    explicit Field(const PhaseGrid& g, T fill = T{})
        : grid(g), values(g.size(), fill) {}

    Field(const PhaseGrid& g, std::vector<T> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw domain_error("Field: value count does not match grid size");
    }

    std::size_t index(std::size_t ia, std::size_t ib) const {
        return ia * grid.axis_b.count + ib;
    }
    T& at(std::size_t ia, std::size_t ib) { return values[index(ia, ib)]; }
    const T& at(std::size_t ia, std::size_t ib) const { return values[index(ia, ib)]; }

    std::size_t rows() const { return grid.axis_a.count; }
    std::size_t cols() const { return grid.axis_b.count; }
};

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;

inline bool all_finite(const RealField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

inline bool all_finite(const ComplexField& f) {
    for (const auto& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

inline double max_abs(const RealField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const ComplexField& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace phaseq
