#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phaseq/operators.hpp"
#include "phaseq/uncertainty.hpp"

using namespace phaseq;

namespace {

constexpr double pi = std::numbers::pi;

// Packet on a grid spanning 8 sigma per axis, so both marginals are resolved
// no matter how anisotropic the packet is.
PhaseWaveFunction packet(double sigma_x, double sigma_p, std::size_t n = 257) {
    const PhaseGrid grid{Grid1D{-8.0 * sigma_x, 8.0 * sigma_x, n},
                         Grid1D{-8.0 * sigma_p, 8.0 * sigma_p, n},
                         AxesKind::position_momentum};
    return make_gaussian_packet(grid, {0.0, 0.0, sigma_x, sigma_p, 1.0});
}

PhaseWaveFunction narrow_angle_state(double sigma_phi) {
    const PhaseGrid grid{Grid1D{0.0, 2.0 * pi, 769, true}, Grid1D{-4.0, 4.0, 129},
                         AxesKind::angle_angular_momentum};
    PhaseWaveFunction psi{grid, RealField(grid), RealField(grid), 1.0, {}, {}};
    for (std::size_t ia = 0; ia < grid.axis_a.count; ++ia)
        for (std::size_t ib = 0; ib < grid.axis_b.count; ++ib) {
            const double dphi = grid.axis_a.point(ia) - pi;
            const double ell = grid.axis_b.point(ib);
            psi.amplitude.at(ia, ib) =
                std::exp(-dphi * dphi / (4.0 * sigma_phi * sigma_phi) - ell * ell / 4.0);
            psi.action.at(ia, ib) = ell * dphi;
        }
    return normalize(psi);
}

} // namespace

TEST_CASE("minimal packet reproduces the closed-form coefficients") {
    const PhaseWaveFunction psi = packet(1.0, 1e-3);
    const AbcCoefficients k = abc_coefficients(psi, ConjugatePair::position_momentum);
    CHECK(std::abs(k.a - 1.0) <= 1e-6);
    CHECK(std::abs(k.b + 1.0) <= 1e-6);
    CHECK(std::abs(k.c - 0.250001) <= 1e-6);
    CHECK(std::abs(k.b_commutator - k.b) <= 1e-6);
    CHECK(std::abs(k.c_second_derivative - k.c) <= 1e-6);

    const UncertaintyReport r = uncertainty_report(psi, ConjugatePair::position_momentum);
    CHECK(std::abs(r.product - std::sqrt(0.250001)) <= 1e-6);
    CHECK(r.bound == 0.5);
    CHECK(r.satisfied);
    CHECK(r.discriminant <= 1e-9);
    CHECK(r.b_identity_residual <= 1e-6);
}

TEST_CASE("isotropic packet lands on the closed-form product") {
    // sigma_p = 1 puts fast x-phases under the derivative stencil, so this
    // closed-form comparison needs the finer grid to reach 1e-6.
    const PhaseWaveFunction psi = packet(1.0, 1.0, 1025);
    const UncertaintyReport r = uncertainty_report(psi, ConjugatePair::position_momentum);
    CHECK(r.product == doctest::Approx(std::sqrt(1.25)).epsilon(1e-6));
    CHECK(r.satisfied);
    CHECK(r.discriminant <= 1e-9);
    CHECK(std::abs(r.b_commutator - r.b) <= 1e-6);
    CHECK(std::abs(r.c_second_derivative - r.c) <= 1e-6 * r.c);

    // The gradient-form C must match the operator-route second moment.
    const double ms = mean_square(momentum_operator(), psi);
    CHECK(r.c == doctest::Approx(ms).epsilon(1e-6));
}

TEST_CASE("random states satisfy the discriminant property") {
    const PhaseGrid grid{Grid1D{-5.0, 5.0, 257}, Grid1D{-5.0, 5.0, 257},
                         AxesKind::position_momentum};
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull, 42ull, 101ull}) {
        const PhaseWaveFunction psi = sample_random_state(grid, {seed, 1.0, 0.75});
        const UncertaintyReport r = uncertainty_report(psi, ConjugatePair::position_momentum);
        CAPTURE(seed);
        CHECK(r.discriminant <= 1e-9);
        CHECK(r.product >= 0.5 * (1.0 - 1e-6));
        CHECK(r.b_identity_residual <= 1e-6);
        CHECK(std::abs(r.b_commutator - r.b) <= 1e-6);
        CHECK(std::abs(r.c_second_derivative - r.c) <= 1e-6 * std::max(1.0, r.c));

        const double ms = mean_square(momentum_operator(), psi);
        CHECK(r.c == doctest::Approx(ms).epsilon(1e-6));
    }
}

TEST_CASE("energy-time machinery mirrors the position-momentum one") {
    const PhaseGrid grid{Grid1D{0.5, 3.5, 257}, Grid1D{-2.0, 2.0, 257},
                         AxesKind::energy_time};
    for (std::uint64_t seed : {5ull, 6ull}) {
        const PhaseWaveFunction psi = sample_random_state(grid, {seed, 1.0, 0.75});
        const UncertaintyReport r = uncertainty_report(psi, ConjugatePair::energy_time);
        CAPTURE(seed);
        CHECK(r.discriminant <= 1e-9);
        CHECK(r.product >= 0.5 * (1.0 - 1e-6));
        CHECK(r.b_identity_residual <= 1e-6);
        CHECK(std::abs(r.b_commutator - r.b) <= 1e-6);
    }

    const PhaseGrid wide{Grid1D{-2.0, 6.0, 257}, Grid1D{-4.0, 4.0, 513},
                         AxesKind::energy_time};
    const PhaseWaveFunction packet_et = make_gaussian_packet(wide, {2.0, 0.0, 0.5, 0.5, 1.0});
    const UncertaintyReport r = uncertainty_report(packet_et, ConjugatePair::energy_time);
    CHECK(r.b_identity_residual <= 1e-6);
    CHECK(r.satisfied);
    // A = <t^2> = sigma_t^2, C = 1/(4 sigma_t^2) + <E^2>, E centered at 2.
    CHECK(r.product == doctest::Approx(std::sqrt(0.25 * 5.25)).epsilon(1e-4));
}

TEST_CASE("angle machinery accepts windowed states and rejects seam support") {
    const PhaseWaveFunction narrow = narrow_angle_state(0.05);
    const UncertaintyReport r = angle_uncertainty_report(narrow);
    CHECK(r.satisfied);
    CHECK(r.product >= r.bound);

    // Centered, the moments collapse to the packet widths.
    const UncertaintyReport rc =
        uncertainty_report(narrow, ConjugatePair::angle_angular_momentum, true);
    CHECK(rc.a == doctest::Approx(0.0025).epsilon(1e-4));
    CHECK(rc.product == doctest::Approx(std::sqrt(0.0025 * 101.0)).epsilon(1e-4));

    const PhaseGrid grid{Grid1D{0.0, 2.0 * pi, 769, true}, Grid1D{-4.0, 4.0, 257},
                         AxesKind::angle_angular_momentum};
    const PhaseWaveFunction rnd = sample_random_state(grid, {9, 1.0, 0.75});
    const UncertaintyReport rr = angle_uncertainty_report(rnd);
    CHECK(rr.discriminant <= 1e-9);
    CHECK(rr.b_identity_residual <= 1e-6);
    CHECK(std::abs(rr.b_commutator - rr.b) <= 1e-6);
    CHECK(rr.satisfied);

    PhaseWaveFunction uniform{grid, RealField(grid, 1.0), RealField(grid), 1.0, {}, {}};
    uniform = normalize(uniform);
    CHECK_THROWS_AS(angle_uncertainty_report(uniform), domain_error);
}

TEST_CASE("uncertainty preconditions") {
    PhaseWaveFunction psi = packet(1.0, 1.0, 129);
    CHECK_THROWS_AS(uncertainty_report(psi, ConjugatePair::energy_time), domain_error);
    CHECK_THROWS_AS(uncertainty_report(psi, ConjugatePair::angle_angular_momentum),
                    domain_error);
    for (double& a : psi.amplitude.values) a *= 2.0;
    CHECK_THROWS_AS(uncertainty_report(psi, ConjugatePair::position_momentum), domain_error);
}

TEST_CASE("centered toggle shifts both moments") {
    const PhaseGrid grid{Grid1D{-6.5, 9.5, 257}, Grid1D{-3.5, 4.5, 257},
                         AxesKind::position_momentum};
    const PhaseWaveFunction psi = make_gaussian_packet(grid, {1.5, 0.5, 1.0, 0.5, 1.0});

    const UncertaintyReport plain = uncertainty_report(psi, ConjugatePair::position_momentum);
    CHECK(plain.a == doctest::Approx(1.0 + 1.5 * 1.5).epsilon(1e-5));

    const UncertaintyReport centered =
        uncertainty_report(psi, ConjugatePair::position_momentum, true);
    CHECK(centered.a == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(centered.product == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
    CHECK(centered.b_identity_residual <= 1e-5);
    CHECK(centered.discriminant <= 1e-9);
}

TEST_CASE("report serialization carries grid and provenance") {
    const PhaseGrid grid{Grid1D{-5.0, 5.0, 257}, Grid1D{-5.0, 5.0, 257},
                         AxesKind::position_momentum};
    const PhaseWaveFunction psi = sample_random_state(grid, {42, 1.0, 0.75});
    const UncertaintyReport r = uncertainty_report(psi, ConjugatePair::position_momentum);
    const nlohmann::ordered_json j = uncertainty_report_json(r, psi);
    CHECK(j.at("pair") == "x-p");
    CHECK(j.at("satisfied").is_boolean());
    CHECK(j.at("b").get<double>() == r.b);
    CHECK(j.at("bound").get<double>() == 0.5);
    CHECK(j.at("grid").at("kind") == "position-momentum");
    CHECK(j.at("grid").at("axis_a").at("count").get<std::size_t>() == 257);
    CHECK(j.at("provenance").at("seed").get<std::uint64_t>() == 42);
    CHECK(j.at("provenance").at("generator") == "random");
}
