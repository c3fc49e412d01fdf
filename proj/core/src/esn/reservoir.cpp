#include "gkesn/esn/reservoir.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "gkesn/errors.hpp"
#include "gkesn/numerics/linalg.hpp"
#include "gkesn/numerics/rng.hpp"

namespace gkesn::esn {

std::uint64_t EsnConfig::recurrent_nnz() const {
    const double d = static_cast<double>(reservoir_size);
    return static_cast<std::uint64_t>(std::llround(density * d * d));
}

void EsnConfig::validate() const {
    if (reservoir_size == 0) {
        throw ValidationError("EsnConfig: reservoir size must be positive");
    }
    if (!(beta1 >= 0.0) || !std::isfinite(beta1)) {
        throw ValidationError("EsnConfig: input scale must be finite and >= 0");
    }
    if (!(beta2 >= 0.0) || !std::isfinite(beta2)) {
        throw ValidationError("EsnConfig: spectral radius must be finite and >= 0");
    }
    if (!(density > 0.0) || density > 1.0) {
        throw ValidationError("EsnConfig: density must lie in (0, 1], got " +
                              std::to_string(density));
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ValidationError("EsnConfig: ridge regularisation must be finite and >= 0");
    }
    if (recurrent_nnz() == 0) {
        throw ValidationError(
            "EsnConfig: density * D^2 rounds to zero recurrent weights; increase density or "
            "the reservoir size");
    }
}

void phi(std::span<const double> in, std::span<double> out) {
    if (in.size() != out.size()) throw ValidationError("phi: length mismatch");
    for (std::size_t i = 0; i < in.size(); ++i) {
        // 1-based even positions are 0-based odd indices
        out[i] = (i % 2 == 1) ? in[i] * in[i] : in[i];
    }
}

void feature_map(const EsnConfig& config, std::span<const double> in, std::span<double> out) {
    if (config.quadratic_features) {
        phi(in, out);
        return;
    }
    if (in.size() != out.size()) throw ValidationError("feature_map: length mismatch");
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i];
}

Reservoir::Reservoir(EsnConfig config, std::size_t n_in, numerics::SparseMatrix a,
                     numerics::DenseMatrix w_in)
    : config_(config), n_in_(n_in), a_(std::move(a)), w_in_(std::move(w_in)) {
    config_.validate();
    if (n_in_ == 0) throw ValidationError("Reservoir: input dimension must be positive");
    const std::size_t d = config_.reservoir_size;
    if (a_.rows() != d || a_.cols() != d) {
        throw ValidationError("Reservoir: recurrent matrix is " + std::to_string(a_.rows()) +
                              "x" + std::to_string(a_.cols()) + ", expected " +
                              std::to_string(d) + "x" + std::to_string(d));
    }
    if (w_in_.rows() != d || w_in_.cols() != n_in_) {
        throw ValidationError("Reservoir: input matrix is " + std::to_string(w_in_.rows()) +
                              "x" + std::to_string(w_in_.cols()) + ", expected " +
                              std::to_string(d) + "x" + std::to_string(n_in_));
    }
    state_.assign(d, 0.0);
    scratch_.assign(d, 0.0);
}

void Reservoir::reset_state() { state_.assign(state_.size(), 0.0); }

void Reservoir::set_state(std::span<const double> r) {
    if (r.size() != state_.size()) throw ValidationError("Reservoir::set_state: length mismatch");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i])) {
            throw ValidationError("Reservoir::set_state: non-finite component");
        }
        state_[i] = r[i];
    }
}

void Reservoir::advance(std::span<const double> x) {
    if (x.size() != n_in_) {
        throw ValidationError("Reservoir::advance: input has " + std::to_string(x.size()) +
                              " components, expected " + std::to_string(n_in_));
    }
    const std::size_t d = config_.reservoir_size;
    a_.matvec(state_, scratch_);
    const double* win = w_in_.data();
    for (std::size_t i = 0; i < d; ++i) {
        const double* row = win + i * n_in_;
        double acc = scratch_[i];
        for (std::size_t j = 0; j < n_in_; ++j) acc += row[j] * x[j];
        state_[i] = std::tanh(acc);
    }
}

Reservoir build_reservoir(const EsnConfig& config, std::size_t n_in) {
    config.validate();
    if (n_in == 0) throw ValidationError("build_reservoir: input dimension must be positive");

    const std::size_t d = config.reservoir_size;
    numerics::Rng rng(config.seed);

    numerics::DenseMatrix w_in(d, n_in);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < n_in; ++j) {
            w_in(i, j) = rng.uniform(-config.beta1, config.beta1);
        }
    }

    const std::uint64_t nnz = config.recurrent_nnz();
    std::vector<numerics::SparseEntry> entries;
    entries.reserve(nnz);
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(nnz * 2);
    while (entries.size() < nnz) {
        const std::uint64_t row = rng.uniform_int(0, d - 1);
        const std::uint64_t col = rng.uniform_int(0, d - 1);
        if (!taken.insert(row * d + col).second) continue;  // repeat position: redraw
        entries.push_back({row, col, rng.uniform(-1.0, 1.0)});
    }
    numerics::SparseMatrix w0(d, d, std::move(entries));

    const double rho = numerics::spectral_radius(w0, 1e-9, 20000);
    if (!(rho > 1e-12)) {
        throw NumericalError(
            "build_reservoir: drawn recurrent matrix has numerically zero spectral radius (" +
            std::to_string(rho) + "); use a different seed");
    }
    w0.scale(config.beta2 / rho);
    return Reservoir(config, n_in, std::move(w0), std::move(w_in));
}

}  // namespace gkesn::esn
