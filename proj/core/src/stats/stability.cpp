#include "gkesn/stats/stability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gkesn/errors.hpp"

namespace gkesn::stats {

double lyapunov_exponent(double i, double length) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("lyapunov_exponent: domain size must be positive, got " +
                              std::to_string(length));
    }
    if (!std::isfinite(i)) {
        throw ValidationError("lyapunov_exponent: index must be finite");
    }
    return 0.093 - 0.94 * (i - 0.39) / length;
}

StabilitySummary stability_summary(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("stability_summary: domain size must be positive, got " +
                              std::to_string(length));
    }
    const double x = length / (2.0 * std::numbers::pi);
    const double nearest = std::round(x);
    const double guard = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x);

    StabilitySummary s;
    s.n_unstable = static_cast<std::uint64_t>(std::abs(x - nearest) <= guard ? nearest
                                                                             : std::floor(x));
    s.marginal_mode = length / (2.0 * std::numbers::sqrt2 * std::numbers::pi);
    s.lyapunov_max = lyapunov_exponent(0.0, length);
    return s;
}

}  // namespace gkesn::stats
