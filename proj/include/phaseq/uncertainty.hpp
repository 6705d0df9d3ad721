#pragma once

#include <string>

#include <json.hpp>

#include "phaseq/wavefunction.hpp"

namespace phaseq {

// Conjugate coordinate pairs covered by the quadratic-form machinery. The
// "coordinate" is the first member; its conjugate enters through derivatives
// along the same axis (x and d/dx, t and d/dt, phi and d/dphi).
enum class ConjugatePair {
    position_momentum,   // coordinate x (axis a), conjugate momentum
    energy_time,         // coordinate t (axis b), conjugate energy
    angle_angular_momentum, // coordinate phi (axis a), conjugate angular momentum
};

std::string to_string(ConjugatePair pair);

// Quadratic-form coefficients of 0 <= integral |alpha * coord * psi + D psi|^2
//   = A alpha^2 + B alpha + C.
// b and c are the primary routes (direct integrands); b_commutator and
// c_second_derivative recompute them through independent discretizations —
// the coordinate/derivative commutator and the second-derivative stencil —
// as an integration-by-parts cross-check.
struct AbcCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double b_commutator = 0.0;
    double c_second_derivative = 0.0;
};

struct UncertaintyReport {
    ConjugatePair pair = ConjugatePair::position_momentum;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double b_commutator = 0.0;
    double c_second_derivative = 0.0;
    double discriminant = 0.0;        // b^2 - 4 a c  (<= 0 up to roundoff)
    double rms_coord = 0.0;           // sqrt(A)
    double rms_conj = 0.0;            // hbar * sqrt(C)
    double product = 0.0;             // rms_coord * rms_conj
    double bound = 0.0;               // hbar / 2
    bool satisfied = false;           // product >= bound * (1 - 1e-9)
    double b_identity_residual = 0.0; // |b + 1|
};

// Second moments are taken about the origin by default; `centered` shifts the
// coordinate by its mean and the derivative by the conjugate mean, turning
// both factors into standard deviations. Preconditions: psi normalized and
// vanishing on the boundary lines of the coordinate axis (the seam line on a
// periodic axis) — the integration-by-parts steps need the boundary terms to
// drop. Violations throw domain_error.
AbcCoefficients abc_coefficients(const PhaseWaveFunction& psi, ConjugatePair pair,
                                 bool centered = false);

UncertaintyReport uncertainty_report(const PhaseWaveFunction& psi, ConjugatePair pair,
                                     bool centered = false);

// The (phi, L) machinery on a periodic angle grid. States with support at the
// angular cut are rejected: without a vanishing seam the boundary terms of the
// proof do not cancel.
UncertaintyReport angle_uncertainty_report(const PhaseWaveFunction& psi);

// All report fields plus hbar, grid metadata, and the state's provenance.
nlohmann::ordered_json uncertainty_report_json(const UncertaintyReport& report,
                                               const PhaseWaveFunction& psi);

} // namespace phaseq
