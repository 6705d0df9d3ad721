#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "phaseq/field.hpp"
#include "phaseq/hamiltonian.hpp"

namespace phaseq {

// Sampled classical path: (t, q, p) with strictly increasing t.
struct Trajectory {
    struct Sample {
        double t, q, p;
    };
    std::vector<Sample> samples;

    explicit Trajectory(std::vector<Sample> s);
};

// Momentum as a function of position on [lower, upper]; either a callable or
// tabulated samples (strictly increasing abscissae).
class MomentumProfile {
public:
    static MomentumProfile from_function(std::function<double(double)> p, double lower,
                                         double upper);
    static MomentumProfile from_table(std::vector<double> x, std::vector<double> p);

    double operator()(double x) const;
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    bool is_tabulated() const { return !table_x_.empty(); }
    const std::vector<double>& table_x() const { return table_x_; }
    const std::vector<double>& table_p() const { return table_p_; }

private:
    MomentumProfile() = default;
    std::function<double(double)> fn_;
    std::vector<double> table_x_, table_p_;
    double lower_ = 0.0, upper_ = 0.0;
};

// Spatial action increment: integral of p dq over [x0, x1]. Composite Simpson
// for callables, trapezoid on the sample polyline for tabulated profiles.
double action_spatial(const MomentumProfile& profile, double x0, double x1);

// Full action along a trajectory: trapezoid sums of p dq minus H dt.
double action_full(const Trajectory& trajectory, const HamiltonianSpec& hamiltonian);

// Mean-value split of the spatial action: S = p_bar * delta_x with
// p(xi) = p_bar at some interior crossing when one exists.
struct MeanValueDecomposition {
    double delta_x;
    double p_bar;
    std::optional<double> xi;
};
MeanValueDecomposition mean_value_decomposition(const MomentumProfile& profile, double x0,
                                                double x1);

// Energy levels from the quantization condition: the closed phase-space loop
// area 2 * integral of sqrt(2m(E - V)) between turning points equals n times
// the action quantum.
struct QuantizationLevel {
    int n;
    double energy;
    double action_value;
    double residual;
};
struct QuantizationResult {
    std::vector<QuantizationLevel> levels;
};

struct QuantizationOptions {
    // scan window for locating the potential minimum of non-box potentials
    double scan_lower = -16.0;
    double scan_upper = 16.0;
    std::size_t scan_count = 8193;
    std::size_t quadrature_count = 4097;
};

QuantizationResult bohr_sommerfeld_levels(const HamiltonianSpec& hamiltonian, int n_max,
                                          const QuantizationOptions& options = {});

// Loop action at a single energy (the quantity matched to n * h above).
double radial_action(const HamiltonianSpec& hamiltonian, double energy,
                     const QuantizationOptions& options = {});

// Classical turning points V(x) = E for a confining potential.
std::pair<double, double> turning_points(const HamiltonianSpec& hamiltonian, double energy,
                                         const QuantizationOptions& options = {});

// Phase field S / hbar.
RealField phase_from_action(const RealField& action, double hbar);

// Smallest t > t0 with integral of E dt' from t0 equal to one action quantum
// h = 2 pi hbar. Marches forward in doubling steps up to t_max.
double temporal_quantum(const std::function<double(double)>& energy_of_t, double t0,
                        double hbar = 1.0, double t_max = 1e12);

} // namespace phaseq
