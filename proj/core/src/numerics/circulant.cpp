#include "gkesn/numerics/circulant.hpp"

#include <cmath>
#include <string>

#include "gkesn/errors.hpp"

namespace gkesn::numerics {

double CirculantOperator::row_sum() const {
    double s = 0.0;
    for (double v : first_column) s += v;
    return s;
}

void validate(const CirculantOperator& op) {
    if (op.first_column.empty()) {
        throw ValidationError("CirculantOperator: size must be positive");
    }
    for (std::size_t i = 0; i < op.first_column.size(); ++i) {
        if (!std::isfinite(op.first_column[i])) {
            throw ValidationError("CirculantOperator: non-finite stencil entry at index " +
                                  std::to_string(i));
        }
    }
}

std::vector<double> circulant_apply(const CirculantOperator& op, std::span<const double> x) {
    validate(op);
    const std::size_t n = op.size();
    if (x.size() != n) throw ValidationError("circulant_apply: vector length mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += op.first_column[(i + n - j) % n] * x[j];
        }
        y[i] = acc;
    }
    return y;
}

CirculantSolver::CirculantSolver(CirculantOperator op) : op_(std::move(op)) {
    validate(op_);
    const std::size_t n = op_.size();

    std::vector<std::complex<double>> eig(n % 2 == 0 ? n / 2 + 1 : n);
    if (n % 2 == 0 && n >= 2) {
        real_plan_ = std::make_unique<RealHalfSpectrumPlan>(n);
        real_plan_->forward(op_.first_column, eig);
        freq_.resize(n / 2 + 1);
    } else {
        complex_plan_ = std::make_unique<FftPlan>(n);
        std::vector<std::complex<double>> col(n);
        for (std::size_t j = 0; j < n; ++j) col[j] = {op_.first_column[j], 0.0};
        complex_plan_->forward(col, eig);
        freq_.resize(n);
        time_.resize(n);
    }

    double max_mod = 0.0;
    for (const auto& l : eig) max_mod = std::max(max_mod, std::abs(l));
    const double floor = 1e-13 * std::max(1.0, max_mod);
    eig_inv_.resize(eig.size());
    for (std::size_t k = 0; k < eig.size(); ++k) {
        if (std::abs(eig[k]) <= floor) {
            throw NumericalError(
                "CirculantSolver: operator is singular — eigenvalue for wavenumber " +
                std::to_string(k) + " has modulus " + std::to_string(std::abs(eig[k])) +
                " (tolerance 1e-13 relative to " + std::to_string(max_mod) + ")");
        }
        eig_inv_[k] = 1.0 / eig[k];
    }
}

void CirculantSolver::solve(std::span<const double> rhs, std::span<double> out) const {
    const std::size_t n = op_.size();
    if (rhs.size() != n || out.size() != n) {
        throw ValidationError("CirculantSolver::solve: vector length mismatch");
    }
    if (real_plan_) {
        real_plan_->forward(rhs, freq_);
        for (std::size_t k = 0; k < freq_.size(); ++k) freq_[k] *= eig_inv_[k];
        real_plan_->inverse(freq_, out);
        return;
    }
    for (std::size_t j = 0; j < n; ++j) time_[j] = {rhs[j], 0.0};
    complex_plan_->forward(time_, freq_);
    for (std::size_t k = 0; k < n; ++k) freq_[k] *= eig_inv_[k];
    complex_plan_->inverse(freq_, time_);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = time_[j].real() * scale;
}

std::vector<double> circulant_solve(const CirculantOperator& op, std::span<const double> rhs) {
    CirculantSolver solver(op);
    std::vector<double> out(rhs.size());
    solver.solve(rhs, out);
    return out;
}

}  // namespace gkesn::numerics
