#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "gkesn/numerics/fft.hpp"

namespace gkesn::numerics {

/// Circulant matrix, represented by its first column c:
///
///   C[i][j] = c[(i - j) mod n]
///
/// Equivalently C*x is the circular convolution c (*) x, so the eigenvalues
/// are the unnormalised DFT of c and every periodic constant-stencil operator
/// fits this type.
struct CirculantOperator {
    std::vector<double> first_column;

    std::size_t size() const { return first_column.size(); }
    double row_sum() const;
};

/// Throws ValidationError unless op has positive size and finite entries.
void validate(const CirculantOperator& op);

/// y = C * x evaluated directly from the definition (O(n^2)). Intended for
/// verification and small problems; repeated solves should use CirculantSolver.
std::vector<double> circulant_apply(const CirculantOperator& op, std::span<const double> x);

/// Factorised circulant solver: diagonalise by DFT once, then each solve is a
/// forward transform, a pointwise division by the eigenvalues, and an inverse
/// transform.
///
/// Construction fails with NumericalError if any eigenvalue modulus is below
/// 1e-13 relative to the largest, naming the offending wavenumber.
///
/// Instances keep internal scratch, so a single instance must not be shared
/// across threads; construct one per worker.
class CirculantSolver {
public:
    explicit CirculantSolver(CirculantOperator op);

    std::size_t size() const { return op_.size(); }
    const CirculantOperator& op() const { return op_; }

    void solve(std::span<const double> rhs, std::span<double> out) const;

private:
    CirculantOperator op_;
    // Even sizes use the packed real transform (half the work in the hot
    // loop); odd sizes fall back to the complex plan.
    std::unique_ptr<RealHalfSpectrumPlan> real_plan_;
    std::unique_ptr<FftPlan> complex_plan_;
    std::vector<std::complex<double>> eig_inv_;  // reciprocals of the eigenvalues
    mutable std::vector<std::complex<double>> freq_;
    mutable std::vector<std::complex<double>> time_;
};

/// One-shot convenience wrapper: factorise, solve, discard.
std::vector<double> circulant_solve(const CirculantOperator& op, std::span<const double> rhs);

}  // namespace gkesn::numerics
