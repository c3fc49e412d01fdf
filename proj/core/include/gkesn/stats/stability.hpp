#pragma once

#include <cstdint>

namespace gkesn::stats {

/// Linear-stability landmarks of a domain of size L.
struct StabilitySummary {
    std::uint64_t n_unstable = 0;  // number of linearly unstable Fourier modes
    double marginal_mode = 0.0;    // wavenumber index of the fastest-growing mode
    double lyapunov_max = 0.0;     // leading Lyapunov exponent estimate
};

/// Leading-order Lyapunov spectrum fit lambda_i(L) = 0.093 - 0.94*(i - 0.39)/L.
/// The index is continuous; i = 0 gives the leading exponent.
double lyapunov_exponent(double i, double length);

/// Landmarks for a domain of size L:
///
///   n_unstable    = floor(L / 2pi), counting modes with positive linear
///                   growth rate q^2 - q^4 > 0 at q = 2 pi k / L. When L/2pi
///                   sits within 4 ulp of an integer the count snaps to that
///                   integer, so exact multiples of 2pi are not lost to
///                   rounding.
///   marginal_mode = L / (2 sqrt(2) pi), where the growth rate peaks.
///   lyapunov_max  = lyapunov_exponent(0, L).
StabilitySummary stability_summary(double length);

}  // namespace gkesn::stats
