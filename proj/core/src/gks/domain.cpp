#include "gkesn/gks/domain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gkesn/errors.hpp"

namespace gkesn::gks {

std::uint64_t DomainConfig::steps_per_sample() const {
    return static_cast<std::uint64_t>(std::llround(dt_sample / dt));
}

void DomainConfig::validate() const {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("DomainConfig: domain length must be positive, got " +
                              std::to_string(length));
    }
    if (!std::isfinite(gamma)) {
        throw ValidationError("DomainConfig: dispersion coefficient must be finite");
    }
    if (nx < 8) {
        throw ValidationError("DomainConfig: need at least 8 grid points, got " +
                              std::to_string(nx));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("DomainConfig: integration step must be positive");
    }
    if (!(dt_sample > 0.0) || !std::isfinite(dt_sample)) {
        throw ValidationError("DomainConfig: snapshot cadence must be positive");
    }
    const std::uint64_t k = steps_per_sample();
    if (k == 0 || std::abs(static_cast<double>(k) * dt - dt_sample) > 1e-6 * dt_sample) {
        throw ValidationError("DomainConfig: snapshot cadence " + std::to_string(dt_sample) +
                              " is not an integer multiple of dt " + std::to_string(dt));
    }
}

IcParams sample_ic_params(numerics::Rng& rng) {
    IcParams ic;
    ic.c1 = rng.uniform01();
    ic.c2 = rng.uniform01();
    ic.p1 = static_cast<int>(rng.uniform_int(1, 6));
    ic.p2 = static_cast<int>(rng.uniform_int(1, 6));
    return ic;
}

std::vector<double> initial_condition_field(const DomainConfig& config, const IcParams& ic) {
    config.validate();
    if (ic.p1 < 1 || ic.p2 < 1) {
        throw ValidationError("initial_condition_field: mode selectors must be >= 1");
    }
    const std::size_t n = config.nx;
    const double dx = config.dx();
    std::vector<double> u(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) * dx;
        u[j] = ic.c1 * std::cos(ic.p1 * x * std::numbers::pi / config.length) +
               ic.c2 * std::cos(ic.p2 * x * std::numbers::pi / config.length);
    }
    return u;
}

std::vector<double> sample_initial_condition(const DomainConfig& config, numerics::Rng& rng,
                                             IcParams* drawn) {
    const IcParams ic = sample_ic_params(rng);
    if (drawn != nullptr) *drawn = ic;
    return initial_condition_field(config, ic);
}

}  // namespace gkesn::gks
