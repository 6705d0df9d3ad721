#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "phaseq/field.hpp"
#include "phaseq/grid.hpp"

namespace phaseq {

// How a state was produced, kept alongside it so reports can be reproduced.
struct Provenance {
    std::string generator = "custom";
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> params;
};

// State of the system at one instant: the polar pieces of psi = amplitude *
// exp(i * action / hbar) on the shared grid.
struct TimeSlice {
    double time = 0.0;
    RealField amplitude;
    RealField action;
};

// Phase-space state psi(a, b) = amplitude * exp(i * action / hbar), with the
// amplitude real and non-negative. When time derivatives are needed, the
// state carries an odd, uniformly spaced ladder of time slices whose middle
// slice is the state itself.
struct PhaseWaveFunction {
    PhaseGrid grid;
    RealField amplitude;
    RealField action;
    double hbar = 1.0;
    std::vector<TimeSlice> time_slices;
    Provenance provenance;
};

// Validates grid/field consistency, non-negative finite amplitude, finite
// action, positive hbar, and the time-slice ladder shape (odd count >= 5,
// uniform spacing). Throws domain_error on the first violation.
void validate_state(const PhaseWaveFunction& state);

ComplexField to_complex(const PhaseWaveFunction& state);
RealField probability_density(const PhaseWaveFunction& state);
double total_probability(const PhaseWaveFunction& state);
bool is_normalized(const PhaseWaveFunction& state, double tol = 1e-8);

// Returns the state scaled so the probability integrates to one. A field with
// no usable mass (zero, or too small to scale safely) is a domain_error.
// Time slices are scaled by the same factor to stay consistent.
PhaseWaveFunction normalize(const PhaseWaveFunction& state);

// True when the amplitude is negligible on every open edge of the domain:
// each non-periodic axis contributes its two boundary lines, a periodic axis
// contributes its seam line. The threshold is rel_tol * max amplitude.
bool boundary_vanishing(const PhaseWaveFunction& state, double rel_tol = 1e-10);

// C-infinity flat-top profile of the normalized coordinate u in [0, 1]:
// exactly 0 on the margins, exactly 1 on the interior plateau, and a smooth
// monotone transition of width `taper` in between. All derivatives vanish at
// both ends of the transition, so it can multiply a state without injecting
// finite-difference artifacts at the joins.
double flat_top_window(double u, double margin, double taper);

struct GaussianPacketParams {
    double center_a = 0.0;  // mean of the position-like coordinate
    double center_b = 0.0;  // mean of the conjugate coordinate
    double sigma_a = 1.0;
    double sigma_b = 1.0;
    double hbar = 1.0;
};

// Minimum-spread packet: amplitude exp(-(a-a0)^2/(4 sa^2) - (b-b0)^2/(4 sb^2))
// with action a*b, tapered to exact zero over the outer 12% of each axis and
// normalized. The grid must leave at least 6 sigma on every side of the
// center; wider margins (the bundled checks use 8) keep the taper away from
// the bulk of the packet and preserve quadrature accuracy.
PhaseWaveFunction make_gaussian_packet(const PhaseGrid& grid, const GaussianPacketParams& p);

struct FreeParticleParams {
    double mass = 1.0;
    double p0 = 2.0;          // center of the momentum window
    double time = 0.0;
    double hbar = 1.0;
    double edge_fraction = 0.2;  // raised-cosine taper width per axis, as a span fraction
    std::size_t slice_count = 0; // 0 = no ladder; otherwise odd >= 5
    double slice_spacing = 0.0;  // required > 0 when slice_count > 0
};

// Force-free state: action p*x - (p^2 / 2m) * t with a separable envelope
// that is exactly flat over the interior of both axes and falls to zero
// through a raised-cosine taper. The envelope is static in time, so the time
// slices share it and differ only in their action.
PhaseWaveFunction make_free_particle(const PhaseGrid& grid, const FreeParticleParams& p);

// Indicator of the flat plateau of that separable envelope (1 inside, else 0),
// shrunk by `halo` grid cells per side so stencil-width neighbourhoods stay
// inside the plateau.
RealField flat_envelope_mask(const PhaseGrid& grid, double edge_fraction, std::size_t halo = 0);

struct RandomStateParams {
    std::uint64_t seed = 1;
    double hbar = 1.0;
    double action_scale = 1.5;  // phase modulation depth, in units of hbar
};

// Deterministic pseudo-random localized state: a squared sum of a few Gaussian
// bumps (so the amplitude stays non-negative and smooth) confined to the
// middle of the domain, multiplied by flat-top windows, with a smooth
// low-frequency action. On angle grids the angular window leaves an exact-zero
// margin around the seam, so wrapped stencils read zeros. Same seed, same
// state, on any platform.
PhaseWaveFunction sample_random_state(const PhaseGrid& grid, const RandomStateParams& p);

// Plain-text table: header then one "x,p,amplitude,action" row per node,
// row-major, values printed with 17 significant digits.
void write_csv(const PhaseWaveFunction& state, std::ostream& out);

// Little-endian layout: two u64 axis counts, then the amplitude block and the
// action block, each row-major f64.
void write_binary(const PhaseWaveFunction& state, std::ostream& out);

} // namespace phaseq
