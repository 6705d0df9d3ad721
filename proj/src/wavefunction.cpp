#include "phaseq/wavefunction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <ostream>
#include <random>

#include "phaseq/numerics.hpp"

namespace phaseq {

namespace {

constexpr double pi = std::numbers::pi;

// Index-based normalized coordinate: exact 0 and 1 at the axis ends.
double axis_u(const Grid1D& axis, std::size_t i) {
    return static_cast<double>(i) / static_cast<double>(axis.count - 1);
}

// Smooth 0 -> 1 transition with all derivatives vanishing at both ends.
double smooth_ramp(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

} // namespace

void validate_state(const PhaseWaveFunction& state) {
    if (!(state.amplitude.grid == state.grid) || !(state.action.grid == state.grid))
        throw domain_error("state: amplitude/action grids do not match the state grid");
    if (!(state.hbar > 0.0) || !std::isfinite(state.hbar))
        throw domain_error("state: hbar must be positive and finite");
    for (double v : state.amplitude.values)
        if (!std::isfinite(v) || v < 0.0)
            throw domain_error("state: amplitude must be finite and non-negative");
    if (!all_finite(state.action))
        throw domain_error("state: action must be finite");
    if (state.time_slices.empty()) return;

    const auto& slices = state.time_slices;
    if (slices.size() < 5 || slices.size() % 2 == 0)
        throw domain_error("state: time slices must come as an odd ladder of at least 5");
    for (const auto& s : slices)
        if (!(s.amplitude.grid == state.grid) || !(s.action.grid == state.grid))
            throw domain_error("state: time slice grids do not match the state grid");
    const double dt = slices[1].time - slices[0].time;
    if (!(dt > 0.0)) throw domain_error("state: time slices must be strictly increasing");
    for (std::size_t k = 1; k + 1 < slices.size(); ++k) {
        const double step = slices[k + 1].time - slices[k].time;
        if (std::abs(step - dt) > 1e-12 * (std::abs(dt) + std::abs(slices[k].time)))
            throw domain_error("state: time slices must be uniformly spaced");
    }
}

ComplexField to_complex(const PhaseWaveFunction& state) {
    ComplexField out(state.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::polar(state.amplitude.values[i],
                                   state.action.values[i] / state.hbar);
    return out;
}

RealField probability_density(const PhaseWaveFunction& state) {
    RealField out(state.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = state.amplitude.values[i] * state.amplitude.values[i];
    return out;
}

double total_probability(const PhaseWaveFunction& state) {
    return integrate_2d(probability_density(state));
}

bool is_normalized(const PhaseWaveFunction& state, double tol) {
    return std::abs(total_probability(state) - 1.0) <= tol;
}

PhaseWaveFunction normalize(const PhaseWaveFunction& state) {
    const double mass = total_probability(state);
    if (!std::isfinite(mass) || mass <= 1e-300)
        throw domain_error("normalize: field carries no usable probability mass");
    const double scale = 1.0 / std::sqrt(mass);
    PhaseWaveFunction out = state;
    for (double& v : out.amplitude.values) v *= scale;
    for (auto& slice : out.time_slices)
        for (double& v : slice.amplitude.values) v *= scale;
    return out;
}

bool boundary_vanishing(const PhaseWaveFunction& state, double rel_tol) {
    const double threshold = rel_tol * max_abs(state.amplitude);
    const auto& amp = state.amplitude;
    const std::size_t na = state.grid.axis_a.count;
    const std::size_t nb = state.grid.axis_b.count;

    auto row_ok = [&](std::size_t ia) {
        for (std::size_t ib = 0; ib < nb; ++ib)
            if (std::abs(amp.at(ia, ib)) > threshold) return false;
        return true;
    };
    auto col_ok = [&](std::size_t ib) {
        for (std::size_t ia = 0; ia < na; ++ia)
            if (std::abs(amp.at(ia, ib)) > threshold) return false;
        return true;
    };

    if (state.grid.axis_a.periodic) {
        if (!row_ok(0)) return false; // the seam plays the role of the boundary
    } else {
        if (!row_ok(0) || !row_ok(na - 1)) return false;
    }
    if (state.grid.axis_b.periodic) {
        if (!col_ok(0)) return false;
    } else {
        if (!col_ok(0) || !col_ok(nb - 1)) return false;
    }
    return true;
}

double flat_top_window(double u, double margin, double taper) {
    if (margin < 0.0 || !(taper > 0.0) || margin + taper > 0.5)
        throw domain_error("flat_top_window: need margin >= 0, taper > 0, margin + taper <= 1/2");
    if (u <= margin || u >= 1.0 - margin) return 0.0;
    return smooth_ramp((u - margin) / taper) * smooth_ramp((1.0 - margin - u) / taper);
}

PhaseWaveFunction make_gaussian_packet(const PhaseGrid& grid, const GaussianPacketParams& p) {
    if (grid.kind == AxesKind::angle_angular_momentum)
        throw domain_error("make_gaussian_packet: not defined on angle grids");
    if (!(p.sigma_a > 0.0) || !(p.sigma_b > 0.0))
        throw domain_error("make_gaussian_packet: spreads must be positive");
    if (!(p.hbar > 0.0)) throw domain_error("make_gaussian_packet: hbar must be positive");
    if (!std::isfinite(p.center_a) || !std::isfinite(p.center_b))
        throw domain_error("make_gaussian_packet: centers must be finite");
    const auto margin_ok = [](const Grid1D& axis, double center, double sigma) {
        return center - axis.lower >= 6.0 * sigma && axis.upper - center >= 6.0 * sigma;
    };
    if (!margin_ok(grid.axis_a, p.center_a, p.sigma_a) ||
        !margin_ok(grid.axis_b, p.center_b, p.sigma_b))
        throw domain_error(
            "make_gaussian_packet: grid must leave at least 6 sigma on every side of the center");

    constexpr double taper = 0.12; // outer fraction of each axis tapered to exact zero

    PhaseWaveFunction state{grid, RealField(grid), RealField(grid), p.hbar, {}, {}};
    for (std::size_t ia = 0; ia < grid.axis_a.count; ++ia) {
        const double a = grid.axis_a.point(ia);
        const double wa = flat_top_window(axis_u(grid.axis_a, ia), 0.0, taper);
        const double da = (a - p.center_a) / p.sigma_a;
        for (std::size_t ib = 0; ib < grid.axis_b.count; ++ib) {
            const double b = grid.axis_b.point(ib);
            const double wb = flat_top_window(axis_u(grid.axis_b, ib), 0.0, taper);
            const double db = (b - p.center_b) / p.sigma_b;
            state.amplitude.at(ia, ib) = std::exp(-0.25 * (da * da + db * db)) * wa * wb;
            state.action.at(ia, ib) = a * b;
        }
    }
    state = normalize(state);
    state.provenance.generator = "gaussian";
    state.provenance.params = {{"center_a", p.center_a}, {"center_b", p.center_b},
                               {"sigma_a", p.sigma_a},   {"sigma_b", p.sigma_b},
                               {"hbar", p.hbar},         {"window_taper", taper}};
    return state;
}

namespace {

// Raised-cosine flat-top envelope: exact 1 on [f, 1-f], smooth fall to exact 0
// at both axis ends.
double cosine_envelope(double u, double f) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    if (u >= f && u <= 1.0 - f) return 1.0;
    const double s = u < f ? u / f : (1.0 - u) / f;
    const double w = std::sin(0.5 * pi * s);
    return w * w;
}

} // namespace

PhaseWaveFunction make_free_particle(const PhaseGrid& grid, const FreeParticleParams& p) {
    if (grid.kind != AxesKind::position_momentum)
        throw domain_error("make_free_particle: needs a position-momentum grid");
    if (!(p.mass > 0.0)) throw domain_error("make_free_particle: mass must be positive");
    if (!(p.hbar > 0.0)) throw domain_error("make_free_particle: hbar must be positive");
    if (!std::isfinite(p.p0) || !std::isfinite(p.time))
        throw domain_error("make_free_particle: p0 and time must be finite");
    if (!(p.edge_fraction > 0.0) || p.edge_fraction >= 0.5)
        throw domain_error("make_free_particle: edge fraction must lie in (0, 1/2)");
    if (p.slice_count != 0) {
        if (p.slice_count < 5 || p.slice_count % 2 == 0)
            throw domain_error("make_free_particle: slice count must be an odd number >= 5");
        if (!(p.slice_spacing > 0.0))
            throw domain_error("make_free_particle: slice spacing must be positive");
    }

    auto action_at = [&](double x, double mom, double t) {
        return mom * x - 0.5 * mom * mom / p.mass * t;
    };

    PhaseWaveFunction state{grid, RealField(grid), RealField(grid), p.hbar, {}, {}};
    for (std::size_t ia = 0; ia < grid.axis_a.count; ++ia) {
        const double x = grid.axis_a.point(ia);
        const double ea = cosine_envelope(axis_u(grid.axis_a, ia), p.edge_fraction);
        for (std::size_t ib = 0; ib < grid.axis_b.count; ++ib) {
            const double mom = grid.axis_b.point(ib);
            const double eb = cosine_envelope(axis_u(grid.axis_b, ib), p.edge_fraction);
            state.amplitude.at(ia, ib) = ea * eb;
            state.action.at(ia, ib) = action_at(x, mom, p.time);
        }
    }
    state = normalize(state);

    if (p.slice_count != 0) {
        const std::size_t center = (p.slice_count - 1) / 2;
        state.time_slices.reserve(p.slice_count);
        for (std::size_t k = 0; k < p.slice_count; ++k) {
            const double t =
                p.time + (static_cast<double>(k) - static_cast<double>(center)) * p.slice_spacing;
            TimeSlice slice{t, state.amplitude, state.action};
            if (k != center) {
                for (std::size_t ia = 0; ia < grid.axis_a.count; ++ia) {
                    const double x = grid.axis_a.point(ia);
                    for (std::size_t ib = 0; ib < grid.axis_b.count; ++ib)
                        slice.action.at(ia, ib) = action_at(x, grid.axis_b.point(ib), t);
                }
            }
            state.time_slices.push_back(std::move(slice));
        }
    }

    state.provenance.generator = "free_particle";
    state.provenance.params = {{"mass", p.mass},
                               {"p0", p.p0},
                               {"time", p.time},
                               {"hbar", p.hbar},
                               {"edge_fraction", p.edge_fraction},
                               {"slice_count", static_cast<double>(p.slice_count)},
                               {"slice_spacing", p.slice_spacing}};
    return state;
}

RealField flat_envelope_mask(const PhaseGrid& grid, double edge_fraction, std::size_t halo) {
    if (!(edge_fraction > 0.0) || edge_fraction >= 0.5)
        throw domain_error("flat_envelope_mask: edge fraction must lie in (0, 1/2)");
    auto flat_range = [&](const Grid1D& axis) {
        std::size_t lo = axis.count, hi = 0;
        for (std::size_t i = 0; i < axis.count; ++i) {
            const double u = axis_u(axis, i);
            if (u >= edge_fraction - 1e-12 && u <= 1.0 - edge_fraction + 1e-12) {
                lo = std::min(lo, i);
                hi = std::max(hi, i);
            }
        }
        if (lo + halo > hi || hi - halo < lo)
            throw domain_error("flat_envelope_mask: flat interior is empty");
        return std::pair{lo + halo, hi - halo};
    };
    const auto [alo, ahi] = flat_range(grid.axis_a);
    const auto [blo, bhi] = flat_range(grid.axis_b);
    if (alo > ahi || blo > bhi)
        throw domain_error("flat_envelope_mask: flat interior is empty");
    RealField mask(grid);
    for (std::size_t ia = alo; ia <= ahi; ++ia)
        for (std::size_t ib = blo; ib <= bhi; ++ib) mask.at(ia, ib) = 1.0;
    return mask;
}

namespace {

struct AxisBands {
    double margin;
    double taper;
    double center_lo, center_hi;
    double width_lo, width_hi;
};

AxisBands bands_for(const PhaseGrid& grid, Axis which) {
    const Grid1D& axis = axis_of(grid, which);
    if (axis.periodic)
        // Keep an exact-zero rim around the seam so wrapped stencils read zeros.
        return {0.08, 0.12, 0.42, 0.58, 0.07, 0.10};
    if (grid.kind == AxesKind::energy_time)
        return {0.0, 0.12, 0.40, 0.60, 0.14, 0.18};
    return {0.0, 0.12, 0.38, 0.62, 0.12, 0.16};
}

} // namespace

PhaseWaveFunction sample_random_state(const PhaseGrid& grid, const RandomStateParams& p) {
    if (!(p.hbar > 0.0)) throw domain_error("sample_random_state: hbar must be positive");
    if (!(p.action_scale >= 0.0) || !std::isfinite(p.action_scale))
        throw domain_error("sample_random_state: action scale must be finite and >= 0");

    std::mt19937_64 eng(p.seed);
    auto unit = [&]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(); };

    const AxisBands ba = bands_for(grid, Axis::a);
    const AxisBands bb = bands_for(grid, Axis::b);

    // Draw order is frozen: bump count; per bump (center_a, center_b, width_a,
    // width_b, height); then per phase term (m, n, alpha, beta, weight).
    const std::size_t bump_count = 3 + static_cast<std::size_t>(eng() & 1u);
    struct Bump {
        double ca, cb, wa, wb, height;
    };
    std::vector<Bump> bumps(bump_count);
    for (auto& b : bumps) {
        b.ca = uni(ba.center_lo, ba.center_hi);
        b.cb = uni(bb.center_lo, bb.center_hi);
        b.wa = uni(ba.width_lo, ba.width_hi);
        b.wb = uni(bb.width_lo, bb.width_hi);
        b.height = uni(0.5, 1.0);
    }

    constexpr std::size_t term_count = 4;
    struct PhaseTerm {
        double m, n, alpha, beta, weight;
    };
    std::vector<PhaseTerm> terms(term_count);
    double weight_sum = 0.0;
    for (auto& t : terms) {
        t.m = 1.0 + static_cast<double>(eng() & 1u);
        t.n = 1.0 + static_cast<double>(eng() & 1u);
        t.alpha = uni(0.0, 2.0 * pi);
        t.beta = uni(0.0, 2.0 * pi);
        t.weight = uni(-1.0, 1.0);
        weight_sum += std::abs(t.weight);
    }
    // Normalize so the combined modulation depth is seed-independent; the
    // 1/m^2 1/n^2 spectral decay keeps high-mode phase gradients gentle.
    for (auto& t : terms)
        t.weight = weight_sum > 1e-9 ? t.weight / weight_sum : 0.25;

    PhaseWaveFunction state{grid, RealField(grid), RealField(grid), p.hbar, {}, {}};
    for (std::size_t ia = 0; ia < grid.axis_a.count; ++ia) {
        const double ua = axis_u(grid.axis_a, ia);
        const double wa = flat_top_window(ua, ba.margin, ba.taper);
        for (std::size_t ib = 0; ib < grid.axis_b.count; ++ib) {
            const double ub = axis_u(grid.axis_b, ib);
            const double wb = flat_top_window(ub, bb.margin, bb.taper);

            double g = 0.0;
            for (const auto& b : bumps) {
                const double da = (ua - b.ca) / b.wa;
                const double db = (ub - b.cb) / b.wb;
                g += b.height * std::exp(-0.5 * (da * da + db * db));
            }
            state.amplitude.at(ia, ib) = g * g * wa * wb;

            double s = 0.0;
            for (const auto& t : terms)
                s += t.weight / (t.m * t.m * t.n * t.n) *
                     std::sin(2.0 * pi * t.m * ua + t.alpha) *
                     std::sin(2.0 * pi * t.n * ub + t.beta);
            state.action.at(ia, ib) = p.hbar * p.action_scale * s;
        }
    }
    state = normalize(state);
    state.provenance.generator = "random";
    state.provenance.seed = p.seed;
    state.provenance.params = {{"action_scale", p.action_scale},
                               {"hbar", p.hbar},
                               {"bump_count", static_cast<double>(bump_count)}};
    return state;
}

void write_csv(const PhaseWaveFunction& state, std::ostream& out) {
    out << "x,p,amplitude,action\n";
    char line[256];
    for (std::size_t ia = 0; ia < state.grid.axis_a.count; ++ia) {
        const double a = state.grid.axis_a.point(ia);
        for (std::size_t ib = 0; ib < state.grid.axis_b.count; ++ib) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", a,
                          state.grid.axis_b.point(ib), state.amplitude.at(ia, ib),
                          state.action.at(ia, ib));
            out << line;
        }
    }
}

void write_binary(const PhaseWaveFunction& state, std::ostream& out) {
    static_assert(std::endian::native == std::endian::little,
                  "binary export assumes a little-endian host");
    const std::uint64_t counts[2] = {state.grid.axis_a.count, state.grid.axis_b.count};
    out.write(reinterpret_cast<const char*>(counts), sizeof counts);
    out.write(reinterpret_cast<const char*>(state.amplitude.values.data()),
              static_cast<std::streamsize>(state.amplitude.values.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(state.action.values.data()),
              static_cast<std::streamsize>(state.action.values.size() * sizeof(double)));
}

} // namespace phaseq
