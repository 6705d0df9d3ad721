#include <phaseq/fluctuation.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include <phaseq/numerics.hpp>

namespace phaseq {

namespace {

double planck_constant(double hbar) { return 2.0 * std::numbers::pi * hbar; }

// Accepts an exact "p/q" fraction or a plain decimal in a string weight.
double parse_weight_string(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            std::size_t used = 0;
            const double value = std::stod(text, &used);
            if (used != text.size()) throw domain_error("trailing characters in weight: " + text);
            return value;
        }
        std::size_t used_num = 0;
        std::size_t used_den = 0;
        const long long num = std::stoll(text.substr(0, slash), &used_num);
        const std::string den_text = text.substr(slash + 1);
        const long long den = std::stoll(den_text, &used_den);
        if (used_num != slash || used_den != den_text.size())
            throw domain_error("malformed rational weight: " + text);
        if (den <= 0) throw domain_error("rational weight needs a positive denominator: " + text);
        return static_cast<double>(num) / static_cast<double>(den);
    } catch (const std::invalid_argument&) {
        throw domain_error("unparseable weight: " + text);
    } catch (const std::out_of_range&) {
        throw domain_error("weight out of range: " + text);
    }
}

}  // namespace

void validate_ensemble(const PathEnsemble& ensemble) {
    if (ensemble.members.empty()) throw domain_error("path ensemble has no members");
    if (!(ensemble.delta > 0.0)) throw domain_error("path ensemble needs delta > 0");
    if (!(ensemble.hbar > 0.0)) throw domain_error("path ensemble needs hbar > 0");
    if (ensemble.n0 < 0) throw domain_error("classical quantum number must be non-negative");
    std::vector<double> weights;
    weights.reserve(ensemble.members.size());
    for (const EnsembleMember& member : ensemble.members) {
        if (member.n < 0) throw domain_error("member quantum numbers must be non-negative");
        if (!(member.weight >= 0.0)) throw domain_error("member weights must be non-negative");
        weights.push_back(member.weight);
    }
    const double total = pairwise_sum(weights);
    if (std::abs(total - 1.0) > 1e-12)
        throw domain_error("member weights must sum to 1, got " + std::to_string(total));
}

FluctuationReport ensemble_fluctuation(const PathEnsemble& ensemble) {
    validate_ensemble(ensemble);
    const double h = planck_constant(ensemble.hbar);

    std::vector<double> terms;
    terms.reserve(ensemble.members.size());
    for (const EnsembleMember& member : ensemble.members)
        terms.push_back(member.weight * static_cast<double>(std::llabs(member.n - ensemble.n0)));

    FluctuationReport report;
    report.k_real = pairwise_sum(terms);
    report.delta_s = report.k_real * h;
    report.delta_conj = report.delta_s / ensemble.delta;
    report.k_nearest = std::llround(report.k_real);
    report.integral_multiple =
        std::abs(report.k_real - static_cast<double>(report.k_nearest)) <= 1e-12;

    if (report.delta_conj == 0.0) {
        report.classicality_ratio = std::numeric_limits<double>::infinity();
    } else {
        const double conj_mean = static_cast<double>(ensemble.n0) * h / ensemble.delta;
        report.classicality_ratio = conj_mean / report.delta_conj;
    }
    return report;
}

FluctuationReport temporal_fluctuation(const PathEnsemble& ensemble) {
    return ensemble_fluctuation(ensemble);
}

std::vector<double> quantized_momenta(double delta_x, const std::vector<long long>& n_list,
                                      double hbar) {
    if (!(delta_x > 0.0)) throw domain_error("quantized momenta need delta_x > 0");
    if (!(hbar > 0.0)) throw domain_error("quantized momenta need hbar > 0");
    const double step = planck_constant(hbar) / delta_x;
    std::vector<double> momenta;
    momenta.reserve(n_list.size());
    for (long long n : n_list) {
        if (n < 0) throw domain_error("quantum numbers must be non-negative");
        momenta.push_back(static_cast<double>(n) * step);
    }
    return momenta;
}

std::vector<double> quantized_energies(double delta_t, const std::vector<long long>& n_list,
                                       double hbar) {
    return quantized_momenta(delta_t, n_list, hbar);
}

const char* to_string(ClassicalityRegime regime) {
    switch (regime) {
        case ClassicalityRegime::quantum: return "quantum";
        case ClassicalityRegime::intermediate: return "intermediate";
        case ClassicalityRegime::classical: return "classical";
    }
    throw domain_error("unknown classicality regime");
}

ClassicalityIndicator classicality_indicator(double p_bar, double delta_p,
                                             const ClassicalityThresholds& thresholds) {
    if (delta_p < 0.0) throw domain_error("classicality needs delta_p >= 0");
    if (!(thresholds.classical > thresholds.quantum))
        throw domain_error("classical threshold must exceed the quantum one");

    ClassicalityIndicator indicator;
    indicator.ratio = delta_p == 0.0 ? std::numeric_limits<double>::infinity()
                                     : std::abs(p_bar) / delta_p;
    if (indicator.ratio >= thresholds.classical) {
        indicator.regime = ClassicalityRegime::classical;
    } else if (indicator.ratio <= thresholds.quantum) {
        indicator.regime = ClassicalityRegime::quantum;
    } else {
        indicator.regime = ClassicalityRegime::intermediate;
    }
    return indicator;
}

PathEnsemble ensemble_from_json(const nlohmann::json& j) {
    try {
        PathEnsemble ensemble;
        ensemble.n0 = j.at("n0").get<long long>();
        if (j.contains("delta_x")) {
            ensemble.delta = j.at("delta_x").get<double>();
        } else if (j.contains("delta_t")) {
            ensemble.delta = j.at("delta_t").get<double>();
        } else {
            ensemble.delta = j.at("delta").get<double>();
        }
        ensemble.hbar = j.value("hbar", 1.0);
        for (const nlohmann::json& entry : j.at("members")) {
            EnsembleMember member;
            member.n = entry.at("n").get<long long>();
            const nlohmann::json& weight = entry.at("weight");
            if (weight.is_string()) {
                member.weight = parse_weight_string(weight.get<std::string>());
            } else if (weight.is_number()) {
                member.weight = weight.get<double>();
            } else {
                throw domain_error("member weight must be a number or a \"p/q\" string");
            }
            ensemble.members.push_back(member);
        }
        validate_ensemble(ensemble);
        return ensemble;
    } catch (const nlohmann::json::exception& err) {
        throw domain_error(std::string("bad ensemble JSON: ") + err.what());
    }
}

nlohmann::ordered_json fluctuation_report_json(const FluctuationReport& report,
                                               const PathEnsemble& ensemble) {
    nlohmann::ordered_json members = nlohmann::ordered_json::array();
    for (const EnsembleMember& member : ensemble.members)
        members.push_back({{"n", member.n}, {"weight", member.weight}});

    nlohmann::ordered_json j;
    j["delta_s"] = report.delta_s;
    j["delta_conj"] = report.delta_conj;
    j["k_real"] = report.k_real;
    j["k_nearest"] = report.k_nearest;
    j["integral_multiple"] = report.integral_multiple;
    if (std::isinf(report.classicality_ratio)) {
        j["classicality_ratio"] = "inf";
    } else {
        j["classicality_ratio"] = report.classicality_ratio;
    }
    j["ensemble"] = {{"n0", ensemble.n0},
                     {"delta", ensemble.delta},
                     {"hbar", ensemble.hbar},
                     {"members", members}};
    return j;
}

}  // namespace phaseq
