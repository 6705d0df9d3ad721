#include "phaseq/action.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "phaseq/numerics.hpp"

namespace phaseq {

namespace {
constexpr double pi = std::numbers::pi;
}

Trajectory::Trajectory(std::vector<Sample> s) : samples(std::move(s)) {
    if (samples.size() < 2)
        throw domain_error("Trajectory: need at least two samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& a = samples[i];
        if (!std::isfinite(a.t) || !std::isfinite(a.q) || !std::isfinite(a.p))
            throw domain_error("Trajectory: sample values must be finite");
        if (i > 0 && !(samples[i - 1].t < a.t))
            throw domain_error("Trajectory: times must be strictly increasing");
    }
}

MomentumProfile MomentumProfile::from_function(std::function<double(double)> p, double lower,
                                               double upper) {
    if (!p) throw domain_error("MomentumProfile: callable is empty");
    if (!(lower < upper)) throw domain_error("MomentumProfile: empty domain");
    MomentumProfile out;
    out.fn_ = std::move(p);
    out.lower_ = lower;
    out.upper_ = upper;
    return out;
}

MomentumProfile MomentumProfile::from_table(std::vector<double> x, std::vector<double> p) {
    if (x.size() < 2 || x.size() != p.size())
        throw domain_error("MomentumProfile: table needs matching x/p samples (>= 2)");
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] < x[i + 1]))
            throw domain_error("MomentumProfile: table abscissae must be strictly increasing");
    MomentumProfile out;
    out.lower_ = x.front();
    out.upper_ = x.back();
    out.table_x_ = std::move(x);
    out.table_p_ = std::move(p);
    return out;
}

double MomentumProfile::operator()(double x) const {
    if (x < lower_ || x > upper_)
        throw domain_error("MomentumProfile: evaluated outside its domain");
    if (!is_tabulated()) return fn_(x);
    const auto it = std::upper_bound(table_x_.begin(), table_x_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - table_x_.begin());
    if (hi == table_x_.size()) --hi;
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double w = (x - table_x_[lo]) / (table_x_[hi] - table_x_[lo]);
    return table_p_[lo] + w * (table_p_[hi] - table_p_[lo]);
}

double action_spatial(const MomentumProfile& profile, double x0, double x1) {
    if (!(x0 < x1)) throw domain_error("action_spatial: x0 must be below x1");
    if (x0 < profile.lower() || x1 > profile.upper())
        throw domain_error("action_spatial: [x0, x1] exceeds the profile domain");

    if (!profile.is_tabulated())
        return integrate_1d([&](double x) { return profile(x); }, x0, x1, 2049);

    // Trapezoid over the sample polyline: exact for the piecewise-linear
    // interpolant, with partial panels at both ends.
    const auto& xs = profile.table_x();
    std::vector<double> knots{x0};
    for (double x : xs)
        if (x > x0 && x < x1) knots.push_back(x);
    knots.push_back(x1);
    std::vector<double> panels(knots.size() - 1);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        panels[i] = 0.5 * (profile(knots[i]) + profile(knots[i + 1])) * (knots[i + 1] - knots[i]);
    return pairwise_sum(panels);
}

double action_full(const Trajectory& trajectory, const HamiltonianSpec& hamiltonian) {
    const auto& s = trajectory.samples;
    std::vector<double> pdq(s.size() - 1), hdt(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        pdq[i] = 0.5 * (s[i].p + s[i + 1].p) * (s[i + 1].q - s[i].q);
        hdt[i] = 0.5 * (hamiltonian.energy(s[i].q, s[i].p) +
                        hamiltonian.energy(s[i + 1].q, s[i + 1].p)) *
                 (s[i + 1].t - s[i].t);
    }
    return pairwise_sum(pdq) - pairwise_sum(hdt);
}

MeanValueDecomposition mean_value_decomposition(const MomentumProfile& profile, double x0,
                                                double x1) {
    const double s = action_spatial(profile, x0, x1);
    const double delta_x = x1 - x0;
    const double p_bar = s / delta_x;

    constexpr std::size_t intervals = 1024;
    std::vector<double> dev(intervals + 1);
    double scale = 0.0;
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double x = x0 + delta_x * static_cast<double>(i) / intervals;
        dev[i] = profile(x) - p_bar;
        scale = std::max(scale, std::abs(dev[i]));
    }

    MeanValueDecomposition out{delta_x, p_bar, std::nullopt};
    if (scale <= 1e-13 * std::max(1.0, std::abs(p_bar))) {
        out.xi = x0 + 0.5 * delta_x;
        return out;
    }
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double x = x0 + delta_x * static_cast<double>(i) / intervals;
        if (dev[i] == 0.0) {
            if (x > x0 && x < x1) {
                out.xi = x;
                return out;
            }
            continue;
        }
        if (i < intervals && dev[i] * dev[i + 1] < 0.0) {
            const double xn = x0 + delta_x * static_cast<double>(i + 1) / intervals;
            out.xi = find_root_bracketed([&](double u) { return profile(u) - p_bar; }, x, xn,
                                         1e-12 * std::max(1.0, std::abs(p_bar)));
            return out;
        }
    }
    return out;
}

namespace {

// Confining-side turning point: marches from `from` in doubling steps until V
// crosses the energy, then solves the crossing. `limit` bounds tabulated
// domains (NaN = unbounded).
double march_to_turning_point(const HamiltonianSpec& hamiltonian, double energy, double from,
                              int direction, double limit) {
    double step = 1e-3 * (1.0 + std::abs(from));
    double prev = from;
    const bool bounded = std::isfinite(limit);
    for (int k = 0; k < 200; ++k) {
        double next = prev + direction * step;
        if (bounded && ((direction > 0 && next > limit) || (direction < 0 && next < limit)))
            next = limit;
        const double v = hamiltonian.potential(next);
        if (v >= energy) {
            const double lo = std::min(prev, next);
            const double hi = std::max(prev, next);
            return find_root_bracketed(
                [&](double x) { return hamiltonian.potential(x) - energy; }, lo, hi,
                1e-13 * std::max(1.0, std::abs(energy)));
        }
        if (bounded && next == limit)
            throw domain_error("potential does not confine at this energy within its domain");
        prev = next;
        step *= 2.0;
    }
    throw numeric_error("turning-point search exhausted its range");
}

struct PotentialFloor {
    double x;
    double v;
};

PotentialFloor potential_floor(const HamiltonianSpec& hamiltonian,
                               const QuantizationOptions& options) {
    double lo = options.scan_lower;
    double hi = options.scan_upper;
    if (hamiltonian.is_tabulated()) {
        const auto& tab = std::get<TabulatedPotential>(hamiltonian.spec());
        lo = tab.x.front();
        hi = tab.x.back();
    }
    if (!(lo < hi) || options.scan_count < 2)
        throw domain_error("quantization scan window is empty");
    PotentialFloor best{lo, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < options.scan_count; ++i) {
        const double x =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(options.scan_count - 1);
        const double v = hamiltonian.potential(x);
        if (v < best.v) best = {x, v};
    }
    return best;
}

} // namespace

std::pair<double, double> turning_points(const HamiltonianSpec& hamiltonian, double energy,
                                         const QuantizationOptions& options) {
    if (hamiltonian.is_box()) {
        const auto& box = std::get<BoxPotential>(hamiltonian.spec());
        if (!(energy > 0.0))
            throw domain_error("box quantization requires positive energy");
        return {0.0, box.length};
    }
    const PotentialFloor floor = potential_floor(hamiltonian, options);
    if (!(floor.v < energy))
        throw domain_error("energy does not exceed the potential minimum in the scan window");
    double limit_lo = std::numeric_limits<double>::quiet_NaN();
    double limit_hi = std::numeric_limits<double>::quiet_NaN();
    if (hamiltonian.is_tabulated()) {
        const auto& tab = std::get<TabulatedPotential>(hamiltonian.spec());
        limit_lo = tab.x.front();
        limit_hi = tab.x.back();
    }
    const double a = march_to_turning_point(hamiltonian, energy, floor.x, -1, limit_lo);
    const double b = march_to_turning_point(hamiltonian, energy, floor.x, +1, limit_hi);
    return {a, b};
}

double radial_action(const HamiltonianSpec& hamiltonian, double energy,
                     const QuantizationOptions& options) {
    const auto [a, b] = turning_points(hamiltonian, energy, options);
    const double m = hamiltonian.mass();
    // x = a + (b - a) sin^2(theta) absorbs the square-root turning-point
    // singularities; the theta-integrand is smooth through both endpoints.
    auto integrand = [&](double theta) {
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        const double x = a + (b - a) * s * s;
        const double under = 2.0 * m * (energy - hamiltonian.potential(x));
        return std::sqrt(std::max(0.0, under)) * (b - a) * 2.0 * s * c;
    };
    return 2.0 * integrate_1d(integrand, 0.0, 0.5 * pi, options.quadrature_count);
}

QuantizationResult bohr_sommerfeld_levels(const HamiltonianSpec& hamiltonian, int n_max,
                                          const QuantizationOptions& options) {
    if (n_max < 1) throw domain_error("bohr_sommerfeld_levels: n_max must be >= 1");
    const double h = hamiltonian.action_quantum();

    double floor_v = 0.0;
    if (!hamiltonian.is_box()) floor_v = potential_floor(hamiltonian, options).v;

    // Starting energy: just above the well floor, backed off until the loop
    // action is safely below the first target.
    double eps = 1.0 + std::abs(floor_v);
    double e_prev = floor_v + eps;
    for (int k = 0; k < 200; ++k) {
        if (radial_action(hamiltonian, e_prev, options) < h) break;
        eps *= 0.5;
        e_prev = floor_v + eps;
        if (k == 199) throw numeric_error("quantization: could not find a starting energy");
    }

    QuantizationResult out;
    bool have_prev_level = false;
    for (int n = 1; n <= n_max; ++n) {
        const double target = static_cast<double>(n) * h;
        const double e_lo = e_prev;
        double delta = std::max(1.0, std::abs(e_lo));
        double e_hi = e_lo + delta;
        int guard = 0;
        while (radial_action(hamiltonian, e_hi, options) < target) {
            delta *= 2.0;
            e_hi += delta;
            if (++guard > 200)
                throw numeric_error("quantization: level bracket search diverged");
        }
        const double e_n = find_root_bracketed(
            [&](double e) { return radial_action(hamiltonian, e, options) - target; }, e_lo,
            e_hi, 1e-12 * std::max(1.0, target));
        const double act = radial_action(hamiltonian, e_n, options);
        if (have_prev_level && !(e_n > out.levels.back().energy))
            throw numeric_error("quantization: levels are not strictly increasing");
        out.levels.push_back({n, e_n, act, std::abs(act - target)});
        e_prev = e_n;
        have_prev_level = true;
    }
    return out;
}

RealField phase_from_action(const RealField& action, double hbar) {
    if (!(hbar > 0.0)) throw domain_error("phase_from_action: hbar must be positive");
    RealField out = action;
    for (double& v : out.values) v /= hbar;
    return out;
}

double temporal_quantum(const std::function<double(double)>& energy_of_t, double t0,
                        double hbar, double t_max) {
    if (!(hbar > 0.0)) throw domain_error("temporal_quantum: hbar must be positive");
    if (!(t_max > t0)) throw domain_error("temporal_quantum: t_max must exceed t0");
    const double h = 2.0 * pi * hbar;
    auto deficit = [&](double t) {
        if (t <= t0) return -h;
        return integrate_1d(energy_of_t, t0, t, 1025) - h;
    };

    const double e0 = energy_of_t(t0);
    if (!std::isfinite(e0)) throw domain_error("temporal_quantum: energy not finite at t0");
    double step = h / (std::abs(e0) + 1.0);
    double prev = t0;
    for (int k = 0; k < 200; ++k) {
        const double next = std::min(prev + step, t_max);
        const double g = deficit(next);
        if (!std::isfinite(g))
            throw numeric_error("temporal_quantum: energy integral is not finite");
        if (g >= 0.0)
            return find_root_bracketed(deficit, prev, next, 1e-12 * std::max(1.0, h));
        if (next >= t_max)
            throw domain_error(
                "temporal_quantum: energy integral never reaches the action quantum");
        prev = next;
        step *= 2.0;
    }
    throw numeric_error("temporal_quantum: search did not terminate");
}

} // namespace phaseq
