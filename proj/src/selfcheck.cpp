#include <phaseq/selfcheck.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

#include <phaseq/action.hpp>
#include <phaseq/fluctuation.hpp>
#include <phaseq/operators.hpp>
#include <phaseq/uncertainty.hpp>
#include <phaseq/version.hpp>
#include <phaseq/wavefunction.hpp>

namespace phaseq {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string fmt1(const char* pattern, double a) {
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), pattern, a);
    return buffer;
}

std::string fmt2(const char* pattern, double a, double b) {
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), pattern, a, b);
    return buffer;
}

// ---- criterion 1: Gaussian packet family product law ----------------------

CriterionResult gaussian_product_law() {
    const double families[5][2] = {{1.0, 1e-3}, {1.0, 0.1}, {1.0, 0.3}, {0.5, 0.2}, {2.0, 0.05}};
    double worst_rel = 0.0;
    double tight_gap = 0.0;
    bool above_floor = true;
    for (const auto& family : families) {
        const double sa = family[0];
        const double sb = family[1];
        const PhaseGrid grid{Grid1D{-8.0 * sa, 8.0 * sa, 257}, Grid1D{-8.0 * sb, 8.0 * sb, 257},
                             AxesKind::position_momentum};
        const PhaseWaveFunction psi = make_gaussian_packet(grid, {0.0, 0.0, sa, sb, 1.0});
        const UncertaintyReport r = uncertainty_report(psi, ConjugatePair::position_momentum);
        const double expected = std::sqrt(0.25 + sa * sa * sb * sb);
        worst_rel = std::max(worst_rel, std::abs(r.product - expected) / expected);
        above_floor = above_floor && r.product >= 0.5;
        if (sb == 1e-3) tight_gap = std::abs(r.product - 0.5) / 0.5;
    }
    const bool pass = worst_rel <= 1e-6 && above_floor && tight_gap <= 2e-6;
    return {1, "gaussian-product-law", pass,
            fmt2("max rel err %.3e; narrow-member gap to the floor %.3e", worst_rel, tight_gap)};
}

// ---- criteria 2-4: the seeded random-state suite ---------------------------

struct SuiteStats {
    double disc_max = -std::numeric_limits<double>::infinity();
    double min_product = std::numeric_limits<double>::infinity();
    double b_id_max = 0.0;
    double routes_max = 0.0;
    double c_rel_max = 0.0;
};

void absorb_states(SuiteStats& stats, const PhaseGrid& grid, ConjugatePair pair,
                   const QuantumOperator& conjugate_op, std::uint64_t seed_count,
                   double perturb_b) {
    for (std::uint64_t seed = 1; seed <= seed_count; ++seed) {
        const PhaseWaveFunction psi = sample_random_state(grid, {seed, 1.0, 0.75});
        const UncertaintyReport r = pair == ConjugatePair::angle_angular_momentum
                                        ? angle_uncertainty_report(psi)
                                        : uncertainty_report(psi, pair);
        stats.disc_max = std::max(stats.disc_max, r.discriminant);
        stats.min_product = std::min(stats.min_product, r.product);
        stats.b_id_max = std::max(stats.b_id_max, std::abs(r.b + 1.0 + perturb_b));
        stats.routes_max = std::max(stats.routes_max, std::abs(r.b_commutator - r.b));
        const double ms = mean_square(conjugate_op, psi);
        stats.c_rel_max = std::max(stats.c_rel_max, std::abs(r.c - ms) / std::abs(ms));
    }
}

SuiteStats state_suite(double perturb_b) {
    SuiteStats stats;
    const PhaseGrid pm{Grid1D{-5.0, 5.0, 257}, Grid1D{-5.0, 5.0, 257},
                       AxesKind::position_momentum};
    absorb_states(stats, pm, ConjugatePair::position_momentum, momentum_operator(), 100,
                  perturb_b);
    const PhaseGrid et{Grid1D{0.5, 3.5, 257}, Grid1D{-2.0, 2.0, 257}, AxesKind::energy_time};
    absorb_states(stats, et, ConjugatePair::energy_time, energy_operator(), 25, perturb_b);
    const PhaseGrid angle{Grid1D{0.0, two_pi, 769, true}, Grid1D{-4.0, 4.0, 257},
                          AxesKind::angle_angular_momentum};
    absorb_states(stats, angle, ConjugatePair::angle_angular_momentum,
                  angular_momentum_operator(), 25, perturb_b);
    return stats;
}

// ---- criterion 5: quantization oracles -------------------------------------

CriterionResult bohr_sommerfeld_oracles() {
    double worst_rel = 0.0;
    double worst_residual_ratio = 0.0;

    const HamiltonianSpec harmonic{1.0, HarmonicPotential{1.0}};
    for (const QuantizationLevel& level : bohr_sommerfeld_levels(harmonic, 10).levels) {
        const double expected = static_cast<double>(level.n);
        worst_rel = std::max(worst_rel, std::abs(level.energy - expected) / expected);
    }
    const HamiltonianSpec box{1.0, BoxPotential{1.0}};
    for (const QuantizationLevel& level : bohr_sommerfeld_levels(box, 10).levels) {
        const double n = static_cast<double>(level.n);
        const double expected = n * n * two_pi * two_pi / 8.0;
        worst_rel = std::max(worst_rel, std::abs(level.energy - expected) / expected);
    }
    const HamiltonianSpec quartic{1.0, PolynomialPotential{{0.0, 0.0, 0.0, 0.0, 1.0}}};
    for (const QuantizationLevel& level : bohr_sommerfeld_levels(quartic, 10).levels) {
        const double scale = static_cast<double>(level.n) * quartic.action_quantum();
        worst_residual_ratio = std::max(worst_residual_ratio, std::abs(level.residual) / scale);
    }

    const bool pass = worst_rel <= 1e-8 && worst_residual_ratio <= 1e-10;
    return {5, "bohr-sommerfeld", pass,
            fmt2("closed-form worst rel %.3e; quartic residual/nh %.3e", worst_rel,
                 worst_residual_ratio)};
}

// ---- criterion 6: commutator residuals and convergence ---------------------

struct CommutatorScan {
    double finest = 0.0;
    bool ratios_ok = true;
};

CommutatorScan commutator_refinements(AxesKind kind, CoordinateAxis coordinate,
                                      const QuantumOperator& op, double a_lo, double a_hi,
                                      double b_lo, double b_hi, std::size_t base, bool refine_a,
                                      const GaussianPacketParams& packet, bool random_state) {
    CommutatorScan scan;
    double previous = 0.0;
    for (int level = 0; level < 3; ++level) {
        const std::size_t n = (base - 1) * (std::size_t{1} << level) + 1;
        const std::size_t na = refine_a ? n : 513;
        const std::size_t nb = refine_a ? 513 : n;
        const PhaseGrid grid{Grid1D{a_lo, a_hi, na, kind == AxesKind::angle_angular_momentum},
                             Grid1D{b_lo, b_hi, nb}, kind};
        const PhaseWaveFunction psi = random_state ? sample_random_state(grid, {9, 1.0, 0.75})
                                                   : make_gaussian_packet(grid, packet);
        const CommutatorReport report = commutator_residual(coordinate, op, psi);
        if (level > 0) {
            const double ratio = previous / report.max_norm;
            scan.ratios_ok = scan.ratios_ok && ratio >= 11.0 && ratio <= 22.0;
        }
        previous = report.max_norm;
    }
    scan.finest = previous;
    return scan;
}

CriterionResult commutator_convergence() {
    const GaussianPacketParams et_packet{2.0, 0.0, 0.5, 0.5, 1.0};
    const std::array<CommutatorScan, 4> scans{
        commutator_refinements(AxesKind::position_momentum, CoordinateAxis::a,
                               momentum_operator(), -8.0, 8.0, -8.0, 8.0, 257, true,
                               {0.0, 0.0, 1.0, 1.0, 1.0}, false),
        commutator_refinements(AxesKind::energy_time, CoordinateAxis::a, time_operator(), -2.0,
                               6.0, -4.0, 4.0, 257, true, et_packet, false),
        commutator_refinements(AxesKind::energy_time, CoordinateAxis::b, energy_operator(), -2.0,
                               6.0, -4.0, 4.0, 257, false, et_packet, false),
        commutator_refinements(AxesKind::angle_angular_momentum, CoordinateAxis::a,
                               angular_momentum_operator(), 0.0, two_pi, -4.0, 4.0, 769, true, {},
                               true)};

    double worst_finest = 0.0;
    bool ratios_ok = true;
    for (const CommutatorScan& scan : scans) {
        worst_finest = std::max(worst_finest, scan.finest);
        ratios_ok = ratios_ok && scan.ratios_ok;
    }
    const bool pass = worst_finest <= 1e-7 && ratios_ok;
    return {6, "commutator-convergence", pass,
            fmt1("worst finest-grid residual %.3e; all refinement ratios in [11, 22]",
                 worst_finest) +
                (ratios_ok ? "" : " VIOLATED")};
}

// ---- criteria 7-8: free-particle operator system ----------------------------

PhaseWaveFunction reference_free_particle() {
    const PhaseGrid grid{Grid1D{-2.0, 2.0, 513}, Grid1D{1.0, 3.0, 257},
                         AxesKind::position_momentum};
    FreeParticleParams params;
    params.p0 = 2.0;
    params.slice_count = 5;
    params.slice_spacing = 0.005;
    return make_free_particle(grid, params);
}

CriterionResult operator_extraction() {
    const PhaseWaveFunction psi = reference_free_particle();
    const RealField mask = flat_envelope_mask(psi.grid, 0.2, 2);
    const RealField p_field = observable_extract(momentum_operator(), psi);
    const RealField x_field = observable_extract(position_operator(), psi);
    const RealField e_field = observable_extract(energy_operator(), psi);

    double dp = 0.0, dx = 0.0, de = 0.0;
    for (std::size_t ia = 0; ia < psi.grid.axis_a.count; ++ia) {
        for (std::size_t ib = 0; ib < psi.grid.axis_b.count; ++ib) {
            if (mask.at(ia, ib) == 0.0) continue;
            const double p = psi.grid.axis_b.point(ib);
            dp = std::max(dp, std::abs(p_field.at(ia, ib) - p));
            dx = std::max(dx, std::abs(x_field.at(ia, ib) - psi.grid.axis_a.point(ia)));
            de = std::max(de, std::abs(e_field.at(ia, ib) - 0.5 * p * p));
        }
    }
    const bool pass = dp <= 1e-7 && dx <= 1e-7 && de <= 1e-7;
    return {7, "operator-extraction", pass,
            fmt2("momentum/position worst %.3e/%.3e", dp, dx) + fmt1(", energy worst %.3e", de)};
}

CriterionResult fundamental_equation() {
    const PhaseWaveFunction psi = reference_free_particle();
    const RealField mask = flat_envelope_mask(psi.grid, 0.2, 2);

    const HamiltonianSpec free_hamiltonian{1.0, PolynomialPotential{{0.0}}};
    const FundamentalEquationReport free_report =
        fundamental_equation_residual(psi, free_hamiltonian, &mask);

    const HamiltonianSpec harmonic{1.0, HarmonicPotential{1.0}};
    const FundamentalEquationReport harmonic_report =
        fundamental_equation_residual(psi, harmonic, &mask);

    const bool pass = free_report.max_norm <= 1e-7 && harmonic_report.identity_max <= 1e-12;
    return {8, "fundamental-equation", pass,
            fmt2("free interior residual %.3e; harmonic two-route gap %.3e", free_report.max_norm,
                 harmonic_report.identity_max)};
}

// ---- criterion 9: fluctuation identities ------------------------------------

template <typename Visit>
void each_composition(std::array<int, 7>& bins, std::size_t index, int remaining, Visit&& visit) {
    if (index + 1 == bins.size()) {
        bins[index] = remaining;
        visit();
        return;
    }
    for (int value = 0; value <= remaining; ++value) {
        bins[index] = value;
        each_composition(bins, index + 1, remaining - value, visit);
    }
}

CriterionResult fluctuation_identities() {
    bool ok = true;
    std::string note = "all identities exact";

    const auto expect = [&](bool condition, const char* label) {
        if (!condition && ok) {
            ok = false;
            note = std::string("first failure: ") + label;
        }
    };

    PathEnsemble symmetric{5, {{6, 0.5}, {4, 0.5}}, 1.0, 1.0};
    const FluctuationReport rs = ensemble_fluctuation(symmetric);
    expect(rs.delta_s == two_pi, "symmetric unit-offset deviation equals h");
    expect(rs.k_real == 1.0, "symmetric unit-offset k equals 1");
    expect(symmetric.delta * rs.delta_conj == rs.delta_s, "window identity at delta 1");

    PathEnsemble single{4, {{4, 1.0}}, 2.5, 1.0};
    const FluctuationReport r1 = ensemble_fluctuation(single);
    expect(r1.delta_s == 0.0 && single.delta * r1.delta_conj == 0.0,
           "definite path has zero fluctuation");

    PathEnsemble dyadic{3, {{5, 0.375}, {1, 0.625}}, 0.25, 1.0};
    const FluctuationReport rd = ensemble_fluctuation(dyadic);
    expect(dyadic.delta * rd.delta_conj == rd.delta_s, "window identity at dyadic delta");

    expect(quantized_momenta(1.0, {0})[0] == 0.0, "zero quantum number gives zero momentum");
    expect(quantized_momenta(1.0, {1})[0] == two_pi, "unit window first momentum equals h");
    expect(quantized_momenta(2.0, {3})[0] == 3.0 * (two_pi / 2.0), "half-window third momentum");
    expect(quantized_energies(1.0, {1})[0] == two_pi, "unit window first energy equals h");

    double min_off_classical = std::numeric_limits<double>::infinity();
    double min_with_classical = std::numeric_limits<double>::infinity();
    bool minimum_only_at_unit_offset = true;
    std::array<int, 7> bins{};
    each_composition(bins, 0, 8, [&] {
        PathEnsemble ensemble;
        ensemble.n0 = 5;
        ensemble.delta = 1.0;
        for (std::size_t i = 0; i < bins.size(); ++i) {
            if (bins[i] == 0) continue;
            ensemble.members.push_back(
                {ensemble.n0 + static_cast<long long>(i) - 3, bins[i] / 8.0});
        }
        if (ensemble.members.empty()) return;
        const FluctuationReport report = ensemble_fluctuation(ensemble);
        if (bins[3] == 0) {
            min_off_classical = std::min(min_off_classical, report.delta_s);
            const bool unit_only = bins[0] == 0 && bins[1] == 0 && bins[5] == 0 && bins[6] == 0;
            if ((report.delta_s == two_pi) != unit_only) minimum_only_at_unit_offset = false;
        } else if (bins[3] != 8) {
            min_with_classical = std::min(min_with_classical, report.delta_s);
        }
    });
    expect(min_off_classical == two_pi, "enumerated off-classical minimum equals h");
    expect(minimum_only_at_unit_offset, "minimum attained exactly at unit offsets");
    expect(min_with_classical == two_pi / 8.0,
           "classical-path mass undercuts h (restriction is necessary)");

    return {9, "fluctuation-identities", ok, note};
}

// ---- assembly ---------------------------------------------------------------

std::vector<CriterionResult> run_core_criteria(double perturb_b) {
    std::vector<CriterionResult> results;
    results.push_back(gaussian_product_law());

    const SuiteStats stats = state_suite(perturb_b);
    results.push_back({2, "discriminant-suite",
                       stats.disc_max <= 1e-9 && stats.min_product >= 0.5 * (1.0 - 1e-6),
                       fmt2("max discriminant %.3e; min product %.9f", stats.disc_max,
                            stats.min_product)});
    results.push_back({3, "b-identity", stats.b_id_max <= 1e-6 && stats.routes_max <= 1e-6,
                       fmt2("max |B + 1| %.3e; max route gap %.3e", stats.b_id_max,
                            stats.routes_max)});
    results.push_back({4, "c-consistency", stats.c_rel_max <= 1e-6,
                       fmt1("max relative gap to the operator second moment %.3e",
                            stats.c_rel_max)});

    results.push_back(bohr_sommerfeld_oracles());
    results.push_back(commutator_convergence());
    results.push_back(operator_extraction());
    results.push_back(fundamental_equation());
    results.push_back(fluctuation_identities());
    return results;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_criteria(double perturb_b, bool with_determinism) {
    std::vector<CriterionResult> results = run_core_criteria(perturb_b);
    if (with_determinism) {
        const std::string first = criteria_report_json(results).dump(2);
        const std::string second = criteria_report_json(run_core_criteria(perturb_b)).dump(2);
        const bool identical = first == second;
        results.push_back({10, "determinism", identical,
                           identical ? "repeat run serialized byte-identical"
                                     : "repeat run serialized differently"});
    }
    return results;
}

std::vector<std::string> acceptance_criterion_names() {
    return {"gaussian-product-law", "discriminant-suite",     "b-identity",
            "c-consistency",        "bohr-sommerfeld",        "commutator-convergence",
            "operator-extraction",  "fundamental-equation",   "fluctuation-identities",
            "determinism"};
}

nlohmann::ordered_json criteria_report_json(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool all = true;
    for (const CriterionResult& result : results) {
        rows.push_back({{"index", result.index},
                        {"name", result.name},
                        {"pass", result.pass},
                        {"detail", result.detail}});
        all = all && result.pass;
    }
    nlohmann::ordered_json j;
    j["tool"] = {{"name", toolkit_name}, {"version", toolkit_version}};
    j["criteria"] = std::move(rows);
    j["all_passed"] = all;
    return j;
}

int selfcheck_command(bool list_only, double perturb_b, std::ostream& out) {
    if (list_only) {
        int index = 1;
        for (const std::string& name : acceptance_criterion_names())
            out << index++ << " " << name << "\n";
        return 0;
    }
    const std::vector<CriterionResult> results = run_acceptance_criteria(perturb_b);
    bool all = true;
    char line[240];
    for (const CriterionResult& result : results) {
        std::snprintf(line, sizeof(line), "[%s] %2d %-24s %s\n", result.pass ? "PASS" : "FAIL",
                      result.index, result.name.c_str(), result.detail.c_str());
        out << line;
        all = all && result.pass;
    }
    out << (all ? "selfcheck: all criteria passed\n" : "selfcheck: FAILURES present\n");
    return all ? 0 : 1;
}

}  // namespace phaseq
