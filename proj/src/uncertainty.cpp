#include "phaseq/uncertainty.hpp"

#include <cmath>
#include <complex>
#include <cstddef>

#include "phaseq/errors.hpp"
#include "phaseq/numerics.hpp"
#include "phaseq/operators.hpp"

namespace phaseq {
namespace {

using cplx = std::complex<double>;

Axis coordinate_axis(ConjugatePair pair) {
    return pair == ConjugatePair::energy_time ? Axis::b : Axis::a;
}

AxesKind required_kind(ConjugatePair pair) {
    switch (pair) {
        case ConjugatePair::position_momentum: return AxesKind::position_momentum;
        case ConjugatePair::energy_time: return AxesKind::energy_time;
        case ConjugatePair::angle_angular_momentum: return AxesKind::angle_angular_momentum;
    }
    throw domain_error("unknown conjugate pair");
}

QuantumOperator conjugate_operator(ConjugatePair pair, double hbar) {
    switch (pair) {
        case ConjugatePair::position_momentum: return momentum_operator(hbar);
        case ConjugatePair::energy_time: return energy_operator(hbar);
        case ConjugatePair::angle_angular_momentum: return angular_momentum_operator(hbar);
    }
    throw domain_error("unknown conjugate pair");
}

CoordinateAxis commutator_coordinate(ConjugatePair pair) {
    return pair == ConjugatePair::energy_time ? CoordinateAxis::b : CoordinateAxis::a;
}

// Sign s in the expected commutator value i*s*hbar; also fixes the direction
// of the conjugate-mean shift when `centered` is on.
double pair_sign(ConjugatePair pair) {
    return pair == ConjugatePair::energy_time ? -1.0 : 1.0;
}

void require_coordinate_boundary_vanishing(const PhaseWaveFunction& psi, Axis axis,
                                           ConjugatePair pair) {
    const Grid1D& g = axis_of(psi.grid, axis);
    const double peak = max_abs(psi.amplitude);
    if (peak <= 0.0) throw domain_error("uncertainty machinery: state is identically zero");
    const double tol = 1e-10 * peak;
    auto line_max = [&](std::size_t fixed) {
        double m = 0.0;
        if (axis == Axis::a) {
            for (std::size_t ib = 0; ib < psi.amplitude.cols(); ++ib)
                m = std::max(m, psi.amplitude.at(fixed, ib));
        } else {
            for (std::size_t ia = 0; ia < psi.amplitude.rows(); ++ia)
                m = std::max(m, psi.amplitude.at(ia, fixed));
        }
        return m;
    };
    if (g.periodic) {
        if (line_max(0) > tol)
            throw domain_error("uncertainty machinery (" + to_string(pair) +
                               "): state does not vanish at the periodic seam; "
                               "window it away from the cut");
    } else if (line_max(0) > tol || line_max(g.count - 1) > tol) {
        throw domain_error("uncertainty machinery (" + to_string(pair) +
                           "): state does not vanish on the coordinate-axis boundary");
    }
}

} // namespace

std::string to_string(ConjugatePair pair) {
    switch (pair) {
        case ConjugatePair::position_momentum: return "x-p";
        case ConjugatePair::energy_time: return "E-t";
        case ConjugatePair::angle_angular_momentum: return "phi-L";
    }
    return "unknown";
}

AbcCoefficients abc_coefficients(const PhaseWaveFunction& psi, ConjugatePair pair,
                                 bool centered) {
    validate_state(psi);
    if (psi.grid.kind != required_kind(pair))
        throw domain_error("uncertainty pair " + to_string(pair) + " requires a " +
                           to_string(required_kind(pair)) + " grid, got " +
                           to_string(psi.grid.kind));
    if (!is_normalized(psi))
        throw domain_error("uncertainty machinery requires a normalized state");
    const Axis axis = coordinate_axis(pair);
    require_coordinate_boundary_vanishing(psi, axis, pair);

    const double hbar = psi.hbar;
    const Grid1D& g = axis_of(psi.grid, axis);
    const ComplexField z = to_complex(psi);
    const ComplexField dz = partial_derivative(z, axis, 1);
    const ComplexField d2z = partial_derivative(z, axis, 2);

    double coord_shift = 0.0;
    cplx delta(0.0, 0.0); // derivative shift: D' psi = D psi - delta * psi
    if (centered) {
        RealField coord_density(psi.grid);
        for (std::size_t ia = 0; ia < coord_density.rows(); ++ia)
            for (std::size_t ib = 0; ib < coord_density.cols(); ++ib) {
                const double amp = psi.amplitude.at(ia, ib);
                coord_density.at(ia, ib) =
                    g.point(axis == Axis::a ? ia : ib) * amp * amp;
            }
        coord_shift = integrate_2d(coord_density);
        const double conj_mean = mean_value(conjugate_operator(pair, hbar), psi);
        delta = cplx(0.0, conj_mean / (pair_sign(pair) * hbar));
    }

    RealField a_integrand(psi.grid);
    RealField b_integrand(psi.grid);
    RealField c_integrand(psi.grid);
    ComplexField c2_integrand(psi.grid);
    for (std::size_t ia = 0; ia < a_integrand.rows(); ++ia) {
        for (std::size_t ib = 0; ib < a_integrand.cols(); ++ib) {
            const double coord = g.point(axis == Axis::a ? ia : ib) - coord_shift;
            const double amp = psi.amplitude.at(ia, ib);
            const cplx zi = z.at(ia, ib);
            const cplx dzi = dz.at(ia, ib) - delta * zi;
            a_integrand.at(ia, ib) = coord * coord * amp * amp;
            b_integrand.at(ia, ib) = 2.0 * coord * (std::conj(zi) * dzi).real();
            c_integrand.at(ia, ib) = std::norm(dzi);
            const cplx d2i = d2z.at(ia, ib) - 2.0 * delta * dz.at(ia, ib) + delta * delta * zi;
            c2_integrand.at(ia, ib) = std::conj(zi) * d2i;
        }
    }

    AbcCoefficients out;
    out.a = integrate_2d(a_integrand);
    out.b = integrate_2d(b_integrand);
    out.c = integrate_2d(c_integrand);
    out.c_second_derivative = -integrate_2d(c2_integrand).real();

    // Independent route for B: run the coordinate through the conjugate
    // operator's commutator and project back onto the state.
    const CommutatorReport comm =
        commutator_residual(commutator_coordinate(pair), conjugate_operator(pair, hbar), psi);
    ComplexField b2_integrand(psi.grid);
    for (std::size_t i = 0; i < b2_integrand.values.size(); ++i) {
        const cplx raw = comm.residual.values[i] + comm.expected * z.values[i];
        b2_integrand.values[i] = std::conj(z.values[i]) * raw;
    }
    out.b_commutator = -(integrate_2d(b2_integrand) / comm.expected).real();
    return out;
}

UncertaintyReport uncertainty_report(const PhaseWaveFunction& psi, ConjugatePair pair,
                                     bool centered) {
    const AbcCoefficients k = abc_coefficients(psi, pair, centered);
    UncertaintyReport r;
    r.pair = pair;
    r.a = k.a;
    r.b = k.b;
    r.c = k.c;
    r.b_commutator = k.b_commutator;
    r.c_second_derivative = k.c_second_derivative;
    r.discriminant = k.b * k.b - 4.0 * k.a * k.c;
    r.rms_coord = std::sqrt(std::max(0.0, k.a));
    r.rms_conj = psi.hbar * std::sqrt(std::max(0.0, k.c));
    r.product = r.rms_coord * r.rms_conj;
    r.bound = 0.5 * psi.hbar;
    r.satisfied = r.product >= r.bound * (1.0 - 1e-9);
    r.b_identity_residual = std::abs(k.b + 1.0);
    return r;
}

UncertaintyReport angle_uncertainty_report(const PhaseWaveFunction& psi) {
    return uncertainty_report(psi, ConjugatePair::angle_angular_momentum);
}

nlohmann::ordered_json uncertainty_report_json(const UncertaintyReport& report,
                                               const PhaseWaveFunction& psi) {
    auto axis_json = [](const Grid1D& g) {
        return nlohmann::ordered_json{{"lower", g.lower},
                                      {"upper", g.upper},
                                      {"count", g.count},
                                      {"periodic", g.periodic}};
    };
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : psi.provenance.params) params[key] = value;
    return nlohmann::ordered_json{
        {"pair", to_string(report.pair)},
        {"a", report.a},
        {"b", report.b},
        {"c", report.c},
        {"b_commutator", report.b_commutator},
        {"c_second_derivative", report.c_second_derivative},
        {"discriminant", report.discriminant},
        {"rms_coord", report.rms_coord},
        {"rms_conj", report.rms_conj},
        {"product", report.product},
        {"bound", report.bound},
        {"satisfied", report.satisfied},
        {"b_identity_residual", report.b_identity_residual},
        {"hbar", psi.hbar},
        {"grid",
         {{"kind", to_string(psi.grid.kind)},
          {"axis_a", axis_json(psi.grid.axis_a)},
          {"axis_b", axis_json(psi.grid.axis_b)}}},
        {"provenance",
         {{"generator", psi.provenance.generator},
          {"seed", psi.provenance.seed},
          {"params", params}}},
    };
}

} // namespace phaseq
