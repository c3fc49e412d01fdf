#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gkesn/errors.hpp"
#include "gkesn/numerics/dense_matrix.hpp"
#include "gkesn/numerics/sparse_matrix.hpp"

namespace gkesn::numerics {

/// In-place Cholesky factorisation A = L L^T of a symmetric positive-definite
/// matrix; the factor is written into the lower triangle, the upper triangle
/// is left untouched. Throws NumericalError on a non-positive pivot with a
/// hint that the system needs (more) regularisation.
void cholesky_factor(DenseMatrix& a);

/// Solve L L^T x = b in place, given the factor produced by cholesky_factor.
void cholesky_solve_inplace(const DenseMatrix& l, std::span<double> x);

/// Ridge regression in normal-equation form:
///
///   W = X R^T (R R^T + mu I)^{-1}
///
/// R is features x samples, X is outputs x samples; the result is
/// outputs x features, the minimiser of |W R - X|^2 + mu |W|^2. The shifted
/// Gram matrix is factorised by Cholesky; no explicit inverse is formed.
DenseMatrix ridge_solve(const DenseMatrix& r, const DenseMatrix& x, double mu);

/// Ridge regression from precomputed sufficient statistics G = R R^T
/// (features x features, symmetric) and C = X R^T (outputs x features):
///
///   W = C (G + mu I)^{-1}
///
/// This is the streaming-friendly form — G and C can be accumulated sample
/// by sample without materialising R. Throws ValidationError if G is
/// asymmetric beyond 1e-9 relative to its largest entry.
DenseMatrix ridge_solve_gram(const DenseMatrix& g, const DenseMatrix& c, double mu);

/// Thrown when the power iteration fails to converge; carries the last
/// estimate and iterate for diagnostics.
class SpectralRadiusError : public NumericalError {
public:
    SpectralRadiusError(const std::string& msg, double last_estimate,
                        std::vector<double> last_iterate)
        : NumericalError(msg),
          last_estimate_(last_estimate),
          last_iterate_(std::move(last_iterate)) {}

    double last_estimate() const { return last_estimate_; }
    const std::vector<double>& last_iterate() const { return last_iterate_; }

private:
    double last_estimate_ = 0.0;
    std::vector<double> last_iterate_;
};

/// Largest-modulus eigenvalue estimate by power iteration, deterministic from
/// the normalised all-ones start vector.
///
/// Each sweep applies the matrix twice and fits the two-term recurrence
/// m*(m*v) ~ p*(m*v) + q*v by least squares; the dominant eigenvalue pair —
/// one real value, a +/- pair, or a complex conjugate pair — satisfies that
/// recurrence exactly, so the larger root modulus of x^2 - p x - q converges
/// to the spectral radius in all three cases. When the iterate collapses onto
/// a single eigendirection the fit degenerates and sqrt(|v . m*(m*v)|) is
/// used instead, which is exact there. Convergence means two successive
/// estimates agree to a relative tol. Throws SpectralRadiusError after
/// max_iters sweeps.
double spectral_radius(const SparseMatrix& m, double tol = 1e-9, std::size_t max_iters = 20000);

}  // namespace gkesn::numerics
