#include "phaseq/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace phaseq {

namespace {

void validate(const PotentialSpec& p) {
    if (const auto* harmonic = std::get_if<HarmonicPotential>(&p)) {
        if (!(harmonic->omega > 0.0))
            throw domain_error("harmonic potential requires omega > 0");
    } else if (const auto* box = std::get_if<BoxPotential>(&p)) {
        if (!(box->length > 0.0))
            throw domain_error("box potential requires positive length");
    } else if (const auto* poly = std::get_if<PolynomialPotential>(&p)) {
        if (poly->coefficients.empty())
            throw domain_error("polynomial potential requires at least one coefficient");
        for (double c : poly->coefficients)
            if (!std::isfinite(c)) throw domain_error("polynomial coefficient is not finite");
    } else if (const auto* tab = std::get_if<TabulatedPotential>(&p)) {
        if (tab->x.size() < 2 || tab->x.size() != tab->v.size())
            throw domain_error("tabulated potential requires matching x/v samples (>= 2)");
        for (std::size_t i = 0; i + 1 < tab->x.size(); ++i)
            if (!(tab->x[i] < tab->x[i + 1]))
                throw domain_error("tabulated potential abscissae must be strictly increasing");
        for (double v : tab->v)
            if (!std::isfinite(v)) throw domain_error("tabulated potential value is not finite");
    }
}

// Index of the segment containing x; throws outside the table.
std::size_t segment_of(const TabulatedPotential& tab, double x) {
    if (x < tab.x.front() || x > tab.x.back())
        throw domain_error("tabulated potential evaluated outside its domain [" +
                           std::to_string(tab.x.front()) + ", " + std::to_string(tab.x.back()) +
                           "]");
    const auto it = std::upper_bound(tab.x.begin(), tab.x.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - tab.x.begin());
    if (hi == tab.x.size()) --hi;
    if (hi == 0) hi = 1;
    return hi - 1;
}

} // namespace

HamiltonianSpec::HamiltonianSpec(double mass, PotentialSpec potential, double hbar)
    : mass_(mass), hbar_(hbar), potential_(std::move(potential)) {
    if (!(mass_ > 0.0)) throw domain_error("HamiltonianSpec: mass must be positive");
    if (!(hbar_ > 0.0)) throw domain_error("HamiltonianSpec: hbar must be positive");
    validate(potential_);
}

double HamiltonianSpec::potential(double x) const {
    if (const auto* harmonic = std::get_if<HarmonicPotential>(&potential_)) {
        return 0.5 * mass_ * harmonic->omega * harmonic->omega * x * x;
    }
    if (const auto* box = std::get_if<BoxPotential>(&potential_)) {
        if (x < 0.0 || x > box->length) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    if (const auto* poly = std::get_if<PolynomialPotential>(&potential_)) {
        double acc = 0.0;
        for (auto it = poly->coefficients.rbegin(); it != poly->coefficients.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }
    const auto& tab = std::get<TabulatedPotential>(potential_);
    const std::size_t i = segment_of(tab, x);
    const double w = (x - tab.x[i]) / (tab.x[i + 1] - tab.x[i]);
    return tab.v[i] + w * (tab.v[i + 1] - tab.v[i]);
}

double HamiltonianSpec::potential_derivative(double x) const {
    if (const auto* harmonic = std::get_if<HarmonicPotential>(&potential_)) {
        return mass_ * harmonic->omega * harmonic->omega * x;
    }
    if (const auto* box = std::get_if<BoxPotential>(&potential_)) {
        if (x < 0.0 || x > box->length)
            throw domain_error("box potential derivative requested outside the well");
        return 0.0;
    }
    if (const auto* poly = std::get_if<PolynomialPotential>(&potential_)) {
        const auto& c = poly->coefficients;
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 1;)
            acc = acc * x + static_cast<double>(k) * c[k];
        return acc;
    }
    const auto& tab = std::get<TabulatedPotential>(potential_);
    const std::size_t i = segment_of(tab, x);
    return (tab.v[i + 1] - tab.v[i]) / (tab.x[i + 1] - tab.x[i]);
}

} // namespace phaseq
