#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include <phaseq/errors.hpp>

namespace phaseq {

// One quantized path: quantum number n carrying probability weight w.
struct EnsembleMember {
    long long n = 0;
    double weight = 0.0;
};

// Weighted family of quantized paths scattered around a classical path n0.
// `delta` is the coordinate window: a position width when the conjugate
// variable is momentum, a time width when it is energy.
struct PathEnsemble {
    long long n0 = 0;
    std::vector<EnsembleMember> members;
    double delta = 1.0;
    double hbar = 1.0;
};

// Throws domain_error unless the ensemble has at least one member, weights
// are non-negative and sum to 1 within 1e-12, quantum numbers are
// non-negative, and delta/hbar are positive.
void validate_ensemble(const PathEnsemble& ensemble);

struct FluctuationReport {
    double delta_s = 0.0;             // weighted mean action deviation
    double delta_conj = 0.0;          // delta_s / delta: momentum (or energy) spread
    double k_real = 0.0;              // delta_s in units of h
    long long k_nearest = 0;          // nearest integer to k_real
    bool integral_multiple = false;   // |k_real - k_nearest| <= 1e-12
    double classicality_ratio = 0.0;  // conjugate mean at n0 over delta_conj; +inf at zero spread
};

// Mean action deviation sum_n W_n |S_n - S_0| = h sum_n W_n |n - n0|, with the
// momentum spread delta_conj = delta_s / delta derived from it.
FluctuationReport ensemble_fluctuation(const PathEnsemble& ensemble);

// Same arithmetic with delta read as a time window, so delta_conj is an
// energy spread.
FluctuationReport temporal_fluctuation(const PathEnsemble& ensemble);

// p_n = n h / delta_x for each n in n_list, with h = 2 pi hbar.
std::vector<double> quantized_momenta(double delta_x, const std::vector<long long>& n_list,
                                      double hbar = 1.0);

// E_n = n h / delta_t: the temporal twin of quantized_momenta.
std::vector<double> quantized_energies(double delta_t, const std::vector<long long>& n_list,
                                       double hbar = 1.0);

enum class ClassicalityRegime { quantum, intermediate, classical };

const char* to_string(ClassicalityRegime regime);

struct ClassicalityThresholds {
    double classical = 100.0;  // ratio at or above this is classical
    double quantum = 10.0;     // ratio at or below this is quantum
};

struct ClassicalityIndicator {
    double ratio = 0.0;  // +inf when delta_p is zero
    ClassicalityRegime regime = ClassicalityRegime::intermediate;
};

// Ratio of mean conjugate value to its fluctuation spread, bucketed into the
// three regimes. Throws domain_error for delta_p < 0 or inverted thresholds.
ClassicalityIndicator classicality_indicator(double p_bar, double delta_p,
                                             const ClassicalityThresholds& thresholds = {});

// Reads {"n0":.., "delta_x"|"delta_t"|"delta":.., "hbar":.., "members":[{"n":..,
// "weight":..}, ...]} where each weight is a number or an exact "p/q" string.
// Throws domain_error on malformed input or invariant violations.
PathEnsemble ensemble_from_json(const nlohmann::json& j);

// Report plus an echo of the ensemble it came from, so the output alone
// reproduces the run. An infinite classicality ratio serializes as "inf".
nlohmann::ordered_json fluctuation_report_json(const FluctuationReport& report,
                                               const PathEnsemble& ensemble);

}  // namespace phaseq
