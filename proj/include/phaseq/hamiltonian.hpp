#pragma once

#include <numbers>
#include <variant>
#include <vector>

#include "phaseq/errors.hpp"

namespace phaseq {

struct HarmonicPotential {
    double omega;
};

// Flat-bottomed well on [0, length] with hard walls.
struct BoxPotential {
    double length;
};

// coefficients[k] multiplies x^k.
struct PolynomialPotential {
    std::vector<double> coefficients;
};

// Piecewise-linear interpolation of (x, v) samples; x strictly increasing.
struct TabulatedPotential {
    std::vector<double> x;
    std::vector<double> v;
};

using PotentialSpec =
    std::variant<HarmonicPotential, BoxPotential, PolynomialPotential, TabulatedPotential>;

// One-particle Hamiltonian H = p^2 / 2m + V(q) in natural units.
class HamiltonianSpec {
public:
    HamiltonianSpec(double mass, PotentialSpec potential, double hbar = 1.0);

    double mass() const { return mass_; }
    double hbar() const { return hbar_; }
    double action_quantum() const { return 2.0 * std::numbers::pi * hbar_; }

    double potential(double x) const;
    // dH/dq. Analytic for every closed-form family; piecewise-constant slope
    // for tabulated potentials.
    double potential_derivative(double x) const;
    // dH/dp = p / m.
    double velocity(double p) const { return p / mass_; }
    double energy(double q, double p) const { return 0.5 * p * p / mass_ + potential(q); }

    const PotentialSpec& spec() const { return potential_; }
    bool is_box() const { return std::holds_alternative<BoxPotential>(potential_); }
    bool is_tabulated() const { return std::holds_alternative<TabulatedPotential>(potential_); }

private:
    double mass_;
    double hbar_;
    PotentialSpec potential_;
};

} // namespace phaseq
