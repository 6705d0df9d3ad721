#pragma once

#include <complex>
#include <optional>

#include "phaseq/field.hpp"
#include "phaseq/hamiltonian.hpp"
#include "phaseq/wavefunction.hpp"

namespace phaseq {

// First-order differential and multiplicative observables on phase-space
// states. Grid compatibility:
//   momentum         -i hbar d/da          position-momentum grids
//   position         -i hbar d/db          position-momentum grids
//   potential        (i hbar / 2) V'(a) d/db   position-momentum grids
//   kinetic          -(i hbar / 2) (b / m) d/da position-momentum grids
//   angular_momentum -i hbar d/da          angle grids (periodic axis a)
//   time             i hbar d/da           energy-time grids
//   energy           i hbar d/dt           energy-time grids (d/db), else a
//                                          time-slice ladder on the state
//   multiply_by_coordinate(axis)           any grid
// The chain-rule realization of the time observable (dividing by dH/dq) is
// deliberately unsupported: it is singular wherever the force vanishes.
enum class OperatorKind {
    energy,
    momentum,
    position,
    potential,
    kinetic,
    angular_momentum,
    time,
    multiply_by_coordinate,
};

struct QuantumOperator {
    OperatorKind kind = OperatorKind::momentum;
    double hbar = 1.0;
    std::optional<HamiltonianSpec> hamiltonian; // required for potential/kinetic
    Axis axis = Axis::a;                        // multiply_by_coordinate only
};

QuantumOperator energy_operator(double hbar = 1.0);
QuantumOperator momentum_operator(double hbar = 1.0);
QuantumOperator position_operator(double hbar = 1.0);
// hbar is taken from the Hamiltonian so coefficients and prefactor agree.
QuantumOperator potential_operator(const HamiltonianSpec& hamiltonian);
QuantumOperator kinetic_operator(const HamiltonianSpec& hamiltonian);
QuantumOperator angular_momentum_operator(double hbar = 1.0);
QuantumOperator time_operator(double hbar = 1.0);
QuantumOperator multiply_by_coordinate(Axis axis, double hbar = 1.0);

struct OperatorApplication {
    ComplexField result;
    // Order-of-magnitude stencil truncation bound derived from divided
    // differences of the state; exactly zero for multiplicative operators.
    double fd_error_estimate = 0.0;
};

// Applies the operator pointwise via 4th-order finite differences.
// Coefficient fields (dH/da, dH/db) come analytically from HamiltonianSpec.
// Throws domain_error when the operator kind does not fit the state's grid
// (or, for the energy kind, when neither an energy-time grid nor a time-slice
// ladder is available).
OperatorApplication apply(const QuantumOperator& op, const PhaseWaveFunction& psi);

// Pointwise Re(apply(op, psi) / psi). Nodes where |psi| < 1e-12 * max|psi| are
// masked and reported as 0. Throws domain_error when every node is masked.
RealField observable_extract(const QuantumOperator& op, const PhaseWaveFunction& psi);

// Re of the phase-space inner product of psi with apply(op, psi); psi must be
// normalized. mean_value_complex keeps the imaginary part, which acts as a
// self-adjointness diagnostic for boundary-vanishing states.
double mean_value(const QuantumOperator& op, const PhaseWaveFunction& psi);
std::complex<double> mean_value_complex(const QuantumOperator& op,
                                        const PhaseWaveFunction& psi);

// Mean of the squared operator, computed with a single second-derivative
// stencil (for the differential kinds) or a squared coordinate weight (for
// multiplication). psi must be normalized.
double mean_square(const QuantumOperator& op, const PhaseWaveFunction& psi);

// Which coordinate multiplies the state in a commutator: a grid axis, or the
// slice time of a state carrying a time ladder.
enum class CoordinateAxis { a, b, time };

struct CommutatorReport {
    ComplexField residual; // (coord op - op coord) psi - expected * psi
    double max_norm = 0.0; // over interior unmasked nodes
    std::complex<double> expected;
};

// Supported pairs and their expected commutator values:
//   (a, momentum)  +i hbar      (b, position)  +i hbar
//   (a, angular_momentum) +i hbar
//   (a, time) -i hbar            on energy-time grids
//   (b, energy) -i hbar          on energy-time grids
//   (time, energy) -i hbar       via the time-slice ladder
CommutatorReport commutator_residual(CoordinateAxis coordinate, const QuantumOperator& op,
                                     const PhaseWaveFunction& psi);

struct FundamentalEquationReport {
    ComplexField residual; // E psi - (kinetic + potential) psi
    double max_norm = 0.0; // interior, optionally restricted by a mask
    // Max pointwise gap between (kinetic + potential) psi and the independent
    // composition (1/2)(dH/db * momentum - dH/da * position) psi.
    double identity_max = 0.0;
};

// Residual of the phase-space evolution identity on a time-sliced state.
// When interior_mask is given, max_norm only scans nodes where the mask is 1
// (e.g. the flat plateau of a free-particle envelope, where the continuum
// residual vanishes identically).
FundamentalEquationReport fundamental_equation_residual(const PhaseWaveFunction& psi,
                                                        const HamiltonianSpec& hamiltonian,
                                                        const RealField* interior_mask = nullptr);

} // namespace phaseq
