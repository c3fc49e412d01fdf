#pragma once

#include <cstdint>
#include <vector>

#include "gkesn/numerics/rng.hpp"

namespace gkesn::gks {

/// Discretisation of one periodic domain/regime.
struct DomainConfig {
    double length = 22.0;       // periodic domain size L
    double gamma = 0.0;         // dispersion coefficient
    std::uint64_t nx = 256;     // grid points
    double dt = 1e-3;           // integration step
    double dt_sample = 0.25;    // snapshot cadence (integer multiple of dt)
    std::uint64_t seed = 1;     // master seed for initial-condition draws

    double dx() const { return length / static_cast<double>(nx); }

    /// Integration steps per recorded snapshot.
    std::uint64_t steps_per_sample() const;

    /// Throws ValidationError when any field is out of range or dt_sample is
    /// not an integer multiple of dt (tolerance 1e-6 relative).
    void validate() const;
};

/// Random two-cosine initial profile:
///
///   u_j = c1 * cos(p1 * x_j * pi / L) + c2 * cos(p2 * x_j * pi / L)
///
/// Odd p makes the profile discontinuous across the periodic seam; this is
/// deliberate — the dynamics smooth it out during the discarded transient,
/// and the seam excites a broad range of modes.
struct IcParams {
    double c1 = 0.0;  // amplitude, Uniform[0,1]
    double c2 = 0.0;  // amplitude, Uniform[0,1]
    int p1 = 1;       // mode selector, Uniform{1..6}
    int p2 = 1;       // mode selector, Uniform{1..6}
};

/// Draw initial-condition parameters from rng in the declaration order
/// c1, c2, p1, p2 (fixed so trajectories are reproducible).
IcParams sample_ic_params(numerics::Rng& rng);

/// Evaluate the initial profile on the grid of config.
std::vector<double> initial_condition_field(const DomainConfig& config, const IcParams& ic);

/// sample_ic_params + initial_condition_field in one call.
std::vector<double> sample_initial_condition(const DomainConfig& config, numerics::Rng& rng,
                                             IcParams* drawn = nullptr);

}  // namespace gkesn::gks
