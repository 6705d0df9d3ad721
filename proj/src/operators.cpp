#include "phaseq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "phaseq/errors.hpp"
#include "phaseq/numerics.hpp"

namespace phaseq {
namespace {

using cplx = std::complex<double>;

const char* kind_name(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::energy: return "energy";
        case OperatorKind::momentum: return "momentum";
        case OperatorKind::position: return "position";
        case OperatorKind::potential: return "potential";
        case OperatorKind::kinetic: return "kinetic";
        case OperatorKind::angular_momentum: return "angular_momentum";
        case OperatorKind::time: return "time";
        case OperatorKind::multiply_by_coordinate: return "multiply_by_coordinate";
    }
    return "unknown";
}

void require_grid_kind(const PhaseGrid& grid, AxesKind want, OperatorKind kind) {
    if (grid.kind != want)
        throw domain_error(std::string("operator '") + kind_name(kind) + "' requires a " +
                           to_string(want) + " grid, got " + to_string(grid.kind));
}

void require_hbar_match(const QuantumOperator& op, const PhaseWaveFunction& psi) {
    if (op.kind == OperatorKind::multiply_by_coordinate) return;
    if (std::abs(op.hbar - psi.hbar) > 1e-12 * std::max(1.0, std::abs(psi.hbar)))
        throw domain_error(std::string("operator '") + kind_name(op.kind) +
                           "' and the state disagree on hbar");
}

const HamiltonianSpec& require_hamiltonian(const QuantumOperator& op) {
    if (!op.hamiltonian)
        throw domain_error(std::string("operator '") + kind_name(op.kind) +
                           "' needs a Hamiltonian for its coefficient field");
    return *op.hamiltonian;
}

// Largest 5th divided difference along an axis: a direct probe of the
// d^5-term that bounds the 5-point first-derivative stencil error.
double diff5_max(const ComplexField& z, Axis axis) {
    static const double c[6] = {-1.0, 5.0, -10.0, 10.0, -5.0, 1.0};
    const Grid1D& g = axis_of(z.grid, axis);
    const std::size_t na = z.rows(), nb = z.cols();
    double best = 0.0;
    auto scan = [&](auto&& value_at, std::size_t line_count, std::size_t n) {
        const std::size_t wrap = n - 1;
        const std::size_t starts = g.periodic ? wrap : (n >= 6 ? n - 5 : 0);
        for (std::size_t line = 0; line < line_count; ++line) {
            for (std::size_t i = 0; i < starts; ++i) {
                cplx acc = 0.0;
                for (std::size_t k = 0; k < 6; ++k) {
                    const std::size_t j = g.periodic ? (i + k) % wrap : i + k;
                    acc += c[k] * value_at(line, j);
                }
                best = std::max(best, std::abs(acc));
            }
        }
    };
    if (axis == Axis::a)
        scan([&](std::size_t ib, std::size_t ia) { return z.at(ia, ib); }, nb, na);
    else
        scan([&](std::size_t ia, std::size_t ib) { return z.at(ia, ib); }, na, nb);
    return best;
}

// Applies the grid realization of an operator to an arbitrary complex field.
// The energy kind is only available here in its energy-time-grid form; the
// time-ladder form needs the state's slices and lives in apply().
ComplexField apply_grid_form(const QuantumOperator& op, const ComplexField& z, double hbar) {
    const PhaseGrid& grid = z.grid;
    switch (op.kind) {
        case OperatorKind::momentum: {
            require_grid_kind(grid, AxesKind::position_momentum, op.kind);
            ComplexField d = partial_derivative(z, Axis::a, 1);
            for (auto& v : d.values) v *= cplx(0.0, -hbar);
            return d;
        }
        case OperatorKind::position: {
            require_grid_kind(grid, AxesKind::position_momentum, op.kind);
            ComplexField d = partial_derivative(z, Axis::b, 1);
            for (auto& v : d.values) v *= cplx(0.0, -hbar);
            return d;
        }
        case OperatorKind::angular_momentum: {
            require_grid_kind(grid, AxesKind::angle_angular_momentum, op.kind);
            ComplexField d = partial_derivative(z, Axis::a, 1);
            for (auto& v : d.values) v *= cplx(0.0, -hbar);
            return d;
        }
        case OperatorKind::time: {
            require_grid_kind(grid, AxesKind::energy_time, op.kind);
            ComplexField d = partial_derivative(z, Axis::a, 1);
            for (auto& v : d.values) v *= cplx(0.0, hbar);
            return d;
        }
        case OperatorKind::energy: {
            require_grid_kind(grid, AxesKind::energy_time, op.kind);
            ComplexField d = partial_derivative(z, Axis::b, 1);
            for (auto& v : d.values) v *= cplx(0.0, hbar);
            return d;
        }
        case OperatorKind::potential: {
            require_grid_kind(grid, AxesKind::position_momentum, op.kind);
            const HamiltonianSpec& h = require_hamiltonian(op);
            ComplexField d = partial_derivative(z, Axis::b, 1);
            for (std::size_t ia = 0; ia < d.rows(); ++ia) {
                const cplx f(0.0, 0.5 * hbar * h.potential_derivative(grid.axis_a.point(ia)));
                for (std::size_t ib = 0; ib < d.cols(); ++ib) d.at(ia, ib) *= f;
            }
            return d;
        }
        case OperatorKind::kinetic: {
            require_grid_kind(grid, AxesKind::position_momentum, op.kind);
            const HamiltonianSpec& h = require_hamiltonian(op);
            ComplexField d = partial_derivative(z, Axis::a, 1);
            for (std::size_t ib = 0; ib < d.cols(); ++ib) {
                const cplx f(0.0, -0.5 * hbar * h.velocity(grid.axis_b.point(ib)));
                for (std::size_t ia = 0; ia < d.rows(); ++ia) d.at(ia, ib) *= f;
            }
            return d;
        }
        case OperatorKind::multiply_by_coordinate: {
            const Grid1D& g = axis_of(grid, op.axis);
            ComplexField out = z;
            for (std::size_t ia = 0; ia < out.rows(); ++ia)
                for (std::size_t ib = 0; ib < out.cols(); ++ib)
                    out.at(ia, ib) *= g.point(op.axis == Axis::a ? ia : ib);
            return out;
        }
    }
    throw domain_error("unknown operator kind");
}

// Truncation estimate for the first-derivative stencil: |prefactor| * h^4/30 *
// max|d^5 psi| with the fifth derivative replaced by its divided difference.
double first_derivative_estimate(const ComplexField& z, Axis axis, double prefactor_max) {
    const double h = axis_of(z.grid, axis).spacing();
    return prefactor_max * diff5_max(z, axis) / (30.0 * h);
}

const std::vector<TimeSlice>& require_ladder(const PhaseWaveFunction& psi) {
    if (psi.time_slices.size() < 5)
        throw domain_error("energy operator needs a time-slice ladder (odd count >= 5) "
                           "or an energy_time grid");
    return psi.time_slices;
}

// 5-point central time derivative of the ladder around the middle slice.
// weight_by_time scales slice k by its own time first (for commutators with
// the time coordinate).
ComplexField ladder_time_derivative(const PhaseWaveFunction& psi, bool weight_by_time) {
    const auto& slices = require_ladder(psi);
    const std::size_t c = slices.size() / 2;
    const double dt = slices[1].time - slices[0].time;
    static const double w[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    ComplexField out(psi.grid);
    for (std::size_t k = 0; k < 5; ++k) {
        if (w[k] == 0.0) continue;
        const TimeSlice& s = slices[c - 2 + k];
        const double scale = w[k] / (12.0 * dt) * (weight_by_time ? s.time : 1.0);
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += scale * std::polar(s.amplitude.values[i], s.action.values[i] / psi.hbar);
    }
    return out;
}

// Stencil-error estimate for the ladder derivative. Only five samples exist,
// so the 4th divided difference stands in for the curvature scale and the
// signal is treated as locally monochromatic: for psi ~ exp(i w t) the exact
// bound hbar * dt^4 w^5 |psi| / 30 equals hbar * |psi| r^(5/4) / (30 dt) with
// r = |delta^4 psi| / |psi|.
double ladder_estimate(const PhaseWaveFunction& psi) {
    const auto& slices = psi.time_slices;
    const std::size_t c = slices.size() / 2;
    const double dt = slices[1].time - slices[0].time;
    static const double c4[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    double best = 0.0;
    const std::size_t n = psi.grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
            const TimeSlice& s = slices[c - 2 + k];
            acc += c4[k] * std::polar(s.amplitude.values[i], s.action.values[i] / psi.hbar);
        }
        best = std::max(best, std::abs(acc));
    }
    const double peak = max_abs(psi.amplitude);
    if (peak <= 0.0) return 0.0;
    return psi.hbar * best * std::pow(best / peak, 0.25) / (30.0 * dt);
}

// Max |f| over interior unmasked nodes: two stencil layers inside every
// non-periodic edge, amplitude above 1e-12 of its peak, and (optionally)
// mask == 1.
double interior_max_norm(const ComplexField& f, const RealField& amplitude,
                         const RealField* mask) {
    const double peak = max_abs(amplitude);
    if (peak <= 0.0) throw domain_error("state is identically zero");
    const double threshold = 1e-12 * peak;
    const Grid1D& ga = f.grid.axis_a;
    const Grid1D& gb = f.grid.axis_b;
    const std::size_t a_lo = ga.periodic ? 0 : 2, a_hi = ga.count - (ga.periodic ? 0 : 2);
    const std::size_t b_lo = gb.periodic ? 0 : 2, b_hi = gb.count - (gb.periodic ? 0 : 2);
    double best = 0.0;
    bool any = false;
    for (std::size_t ia = a_lo; ia < a_hi; ++ia) {
        for (std::size_t ib = b_lo; ib < b_hi; ++ib) {
            if (amplitude.at(ia, ib) < threshold) continue;
            if (mask && mask->at(ia, ib) != 1.0) continue;
            best = std::max(best, std::abs(f.at(ia, ib)));
            any = true;
        }
    }
    if (!any) throw domain_error("no interior nodes survive amplitude masking");
    return best;
}

} // namespace

QuantumOperator energy_operator(double hbar) { return {OperatorKind::energy, hbar, {}, Axis::a}; }
QuantumOperator momentum_operator(double hbar) { return {OperatorKind::momentum, hbar, {}, Axis::a}; }
QuantumOperator position_operator(double hbar) { return {OperatorKind::position, hbar, {}, Axis::a}; }
QuantumOperator potential_operator(const HamiltonianSpec& hamiltonian) {
    return {OperatorKind::potential, hamiltonian.hbar(), hamiltonian, Axis::a};
}
QuantumOperator kinetic_operator(const HamiltonianSpec& hamiltonian) {
    return {OperatorKind::kinetic, hamiltonian.hbar(), hamiltonian, Axis::a};
}
QuantumOperator angular_momentum_operator(double hbar) {
    return {OperatorKind::angular_momentum, hbar, {}, Axis::a};
}
QuantumOperator time_operator(double hbar) { return {OperatorKind::time, hbar, {}, Axis::a}; }
QuantumOperator multiply_by_coordinate(Axis axis, double hbar) {
    return {OperatorKind::multiply_by_coordinate, hbar, {}, axis};
}

OperatorApplication apply(const QuantumOperator& op, const PhaseWaveFunction& psi) {
    validate_state(psi);
    require_hbar_match(op, psi);
    const double hbar = psi.hbar;

    if (op.kind == OperatorKind::energy && psi.grid.kind != AxesKind::energy_time) {
        ComplexField d = ladder_time_derivative(psi, false);
        for (auto& v : d.values) v *= cplx(0.0, hbar);
        return {std::move(d), ladder_estimate(psi)};
    }

    const ComplexField z = to_complex(psi);
    ComplexField result = apply_grid_form(op, z, hbar);

    double estimate = 0.0;
    switch (op.kind) {
        case OperatorKind::momentum:
        case OperatorKind::angular_momentum:
            estimate = first_derivative_estimate(z, Axis::a, hbar);
            break;
        case OperatorKind::time:
            estimate = first_derivative_estimate(z, Axis::a, hbar);
            break;
        case OperatorKind::position:
        case OperatorKind::energy:
            estimate = first_derivative_estimate(z, Axis::b, hbar);
            break;
        case OperatorKind::potential: {
            const HamiltonianSpec& h = *op.hamiltonian;
            double cmax = 0.0;
            for (std::size_t ia = 0; ia < psi.grid.axis_a.count; ++ia)
                cmax = std::max(cmax, std::abs(h.potential_derivative(psi.grid.axis_a.point(ia))));
            estimate = first_derivative_estimate(z, Axis::b, 0.5 * hbar * cmax);
            break;
        }
        case OperatorKind::kinetic: {
            const HamiltonianSpec& h = *op.hamiltonian;
            const double pmax = std::max(std::abs(psi.grid.axis_b.lower), std::abs(psi.grid.axis_b.upper));
            estimate = first_derivative_estimate(z, Axis::a, 0.5 * hbar * std::abs(h.velocity(pmax)));
            break;
        }
        case OperatorKind::multiply_by_coordinate:
            estimate = 0.0;
            break;
    }
    return {std::move(result), estimate};
}

RealField observable_extract(const QuantumOperator& op, const PhaseWaveFunction& psi) {
    const OperatorApplication app = apply(op, psi);
    const double peak = max_abs(psi.amplitude);
    if (peak <= 0.0) throw domain_error("observable_extract: state is identically zero");
    const double threshold = 1e-12 * peak;
    RealField out(psi.grid, 0.0);
    bool any = false;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (psi.amplitude.values[i] < threshold) continue;
        const cplx value = std::polar(psi.amplitude.values[i], psi.action.values[i] / psi.hbar);
        out.values[i] = (app.result.values[i] / value).real();
        any = true;
    }
    if (!any) throw domain_error("observable_extract: every node is masked");
    return out;
}

std::complex<double> mean_value_complex(const QuantumOperator& op, const PhaseWaveFunction& psi) {
    if (!is_normalized(psi))
        throw domain_error("mean_value requires a normalized state");
    const OperatorApplication app = apply(op, psi);
    const ComplexField z = to_complex(psi);
    ComplexField integrand(psi.grid);
    for (std::size_t i = 0; i < integrand.values.size(); ++i)
        integrand.values[i] = std::conj(z.values[i]) * app.result.values[i];
    return integrate_2d(integrand);
}

double mean_value(const QuantumOperator& op, const PhaseWaveFunction& psi) {
    return mean_value_complex(op, psi).real();
}

double mean_square(const QuantumOperator& op, const PhaseWaveFunction& psi) {
    validate_state(psi);
    require_hbar_match(op, psi);
    if (!is_normalized(psi))
        throw domain_error("mean_square requires a normalized state");
    const double hbar = psi.hbar;

    if (op.kind == OperatorKind::multiply_by_coordinate) {
        const Grid1D& g = axis_of(psi.grid, op.axis);
        RealField integrand(psi.grid);
        for (std::size_t ia = 0; ia < integrand.rows(); ++ia)
            for (std::size_t ib = 0; ib < integrand.cols(); ++ib) {
                const double coord = g.point(op.axis == Axis::a ? ia : ib);
                const double amp = psi.amplitude.at(ia, ib);
                integrand.at(ia, ib) = coord * coord * amp * amp;
            }
        return integrate_2d(integrand);
    }

    Axis axis = Axis::a;
    bool ladder = false;
    switch (op.kind) {
        case OperatorKind::momentum:
            require_grid_kind(psi.grid, AxesKind::position_momentum, op.kind);
            axis = Axis::a;
            break;
        case OperatorKind::position:
            require_grid_kind(psi.grid, AxesKind::position_momentum, op.kind);
            axis = Axis::b;
            break;
        case OperatorKind::angular_momentum:
            require_grid_kind(psi.grid, AxesKind::angle_angular_momentum, op.kind);
            axis = Axis::a;
            break;
        case OperatorKind::time:
            require_grid_kind(psi.grid, AxesKind::energy_time, op.kind);
            axis = Axis::a;
            break;
        case OperatorKind::energy:
            if (psi.grid.kind == AxesKind::energy_time)
                axis = Axis::b;
            else
                ladder = true;
            break;
        default:
            throw domain_error(std::string("mean_square does not support operator '") +
                               kind_name(op.kind) + "'");
    }

    const ComplexField z = to_complex(psi);
    ComplexField d2(psi.grid);
    if (ladder) {
        const auto& slices = require_ladder(psi);
        const std::size_t c = slices.size() / 2;
        const double dt = slices[1].time - slices[0].time;
        static const double w2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
        for (std::size_t k = 0; k < 5; ++k) {
            const TimeSlice& s = slices[c - 2 + k];
            const double scale = w2[k] / (12.0 * dt * dt);
            for (std::size_t i = 0; i < d2.values.size(); ++i)
                d2.values[i] += scale * std::polar(s.amplitude.values[i], s.action.values[i] / hbar);
        }
    } else {
        d2 = partial_derivative(z, axis, 2);
    }

    ComplexField integrand(psi.grid);
    for (std::size_t i = 0; i < integrand.values.size(); ++i)
        integrand.values[i] = std::conj(z.values[i]) * d2.values[i];
    return -hbar * hbar * integrate_2d(integrand).real();
}

CommutatorReport commutator_residual(CoordinateAxis coordinate, const QuantumOperator& op,
                                     const PhaseWaveFunction& psi) {
    validate_state(psi);
    require_hbar_match(op, psi);
    const double hbar = psi.hbar;
    const PhaseGrid& grid = psi.grid;

    double sign = 0.0;
    bool supported = false;
    bool ladder = false;
    if (coordinate == CoordinateAxis::a && op.kind == OperatorKind::momentum &&
        grid.kind == AxesKind::position_momentum) {
        sign = 1.0;
        supported = true;
    } else if (coordinate == CoordinateAxis::b && op.kind == OperatorKind::position &&
               grid.kind == AxesKind::position_momentum) {
        sign = 1.0;
        supported = true;
    } else if (coordinate == CoordinateAxis::a && op.kind == OperatorKind::angular_momentum &&
               grid.kind == AxesKind::angle_angular_momentum) {
        sign = 1.0;
        supported = true;
    } else if (coordinate == CoordinateAxis::a && op.kind == OperatorKind::time &&
               grid.kind == AxesKind::energy_time) {
        sign = -1.0;
        supported = true;
    } else if (coordinate == CoordinateAxis::b && op.kind == OperatorKind::energy &&
               grid.kind == AxesKind::energy_time) {
        sign = -1.0;
        supported = true;
    } else if (coordinate == CoordinateAxis::time && op.kind == OperatorKind::energy &&
               grid.kind != AxesKind::energy_time) {
        sign = -1.0;
        supported = true;
        ladder = true;
    }
    if (!supported)
        throw domain_error(std::string("unsupported commutator pair: coordinate ") +
                           (coordinate == CoordinateAxis::a ? "a"
                            : coordinate == CoordinateAxis::b ? "b"
                                                              : "time") +
                           " with operator '" + kind_name(op.kind) + "' on a " +
                           to_string(grid.kind) + " grid");

    const cplx expected(0.0, sign * hbar);
    const ComplexField z = to_complex(psi);
    ComplexField residual(grid);

    if (ladder) {
        const auto& slices = require_ladder(psi);
        const double t_center = slices[slices.size() / 2].time;
        ComplexField d_psi = ladder_time_derivative(psi, false);
        ComplexField d_tpsi = ladder_time_derivative(psi, true);
        for (std::size_t i = 0; i < residual.values.size(); ++i) {
            const cplx op_z = cplx(0.0, hbar) * d_psi.values[i];
            const cplx op_cz = cplx(0.0, hbar) * d_tpsi.values[i];
            residual.values[i] = t_center * op_z - op_cz - expected * z.values[i];
        }
    } else {
        const Axis coord_axis = coordinate == CoordinateAxis::a ? Axis::a : Axis::b;
        const Grid1D& g = axis_of(grid, coord_axis);
        ComplexField cz = z;
        for (std::size_t ia = 0; ia < cz.rows(); ++ia)
            for (std::size_t ib = 0; ib < cz.cols(); ++ib)
                cz.at(ia, ib) *= g.point(coord_axis == Axis::a ? ia : ib);
        const ComplexField op_z = apply_grid_form(op, z, hbar);
        const ComplexField op_cz = apply_grid_form(op, cz, hbar);
        for (std::size_t ia = 0; ia < residual.rows(); ++ia)
            for (std::size_t ib = 0; ib < residual.cols(); ++ib) {
                const double coord = g.point(coord_axis == Axis::a ? ia : ib);
                residual.at(ia, ib) = coord * op_z.at(ia, ib) - op_cz.at(ia, ib) -
                                      expected * z.at(ia, ib);
            }
    }

    const double norm = interior_max_norm(residual, psi.amplitude, nullptr);
    return {std::move(residual), norm, expected};
}

FundamentalEquationReport fundamental_equation_residual(const PhaseWaveFunction& psi,
                                                        const HamiltonianSpec& hamiltonian,
                                                        const RealField* interior_mask) {
    validate_state(psi);
    require_grid_kind(psi.grid, AxesKind::position_momentum, OperatorKind::energy);
    require_ladder(psi);
    const double hbar = psi.hbar;
    const PhaseGrid& grid = psi.grid;

    ComplexField e_psi = ladder_time_derivative(psi, false);
    for (auto& v : e_psi.values) v *= cplx(0.0, hbar);

    QuantumOperator kin{OperatorKind::kinetic, hbar, hamiltonian, Axis::a};
    QuantumOperator pot{OperatorKind::potential, hbar, hamiltonian, Axis::a};
    QuantumOperator mom = momentum_operator(hbar);
    QuantumOperator pos = position_operator(hbar);

    const ComplexField z = to_complex(psi);
    const ComplexField kin_z = apply_grid_form(kin, z, hbar);
    const ComplexField pot_z = apply_grid_form(pot, z, hbar);
    const ComplexField mom_z = apply_grid_form(mom, z, hbar);
    const ComplexField pos_z = apply_grid_form(pos, z, hbar);

    ComplexField residual(grid);
    double identity_max = 0.0;
    for (std::size_t ia = 0; ia < residual.rows(); ++ia) {
        const double dv = hamiltonian.potential_derivative(grid.axis_a.point(ia));
        for (std::size_t ib = 0; ib < residual.cols(); ++ib) {
            const double vel = hamiltonian.velocity(grid.axis_b.point(ib));
            const cplx route1 = kin_z.at(ia, ib) + pot_z.at(ia, ib);
            const cplx route2 = 0.5 * (vel * mom_z.at(ia, ib) - dv * pos_z.at(ia, ib));
            identity_max = std::max(identity_max, std::abs(route1 - route2));
            residual.at(ia, ib) = e_psi.at(ia, ib) - route1;
        }
    }

    const double norm = interior_max_norm(residual, psi.amplitude, interior_mask);
    return {std::move(residual), norm, identity_max};
}

} // namespace phaseq
