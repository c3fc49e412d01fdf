#include "gkesn/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gkesn::numerics {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

void cholesky_factor(DenseMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n) {
        throw ValidationError("cholesky_factor: matrix must be square and non-empty");
    }
    double* p = a.data();
    for (std::size_t i = 0; i < n; ++i) {
        double* row_i = p + i * n;
        for (std::size_t j = 0; j <= i; ++j) {
            const double* row_j = p + j * n;
            double s = row_i[j];
            for (std::size_t k = 0; k < j; ++k) s -= row_i[k] * row_j[k];
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) {
                    throw NumericalError(
                        "cholesky_factor: non-positive pivot " + std::to_string(s) +
                        " at row " + std::to_string(i) +
                        " — the normal matrix is singular or indefinite; increase the ridge "
                        "regularisation");
                }
                row_i[i] = std::sqrt(s);
            } else {
                row_i[j] = s / row_j[j];
            }
        }
    }
}

void cholesky_solve_inplace(const DenseMatrix& l, std::span<double> x) {
    const std::size_t n = l.rows();
    if (x.size() != n) throw ValidationError("cholesky_solve_inplace: vector length mismatch");
    const double* p = l.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double* row_i = p + i * n;
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= row_i[k] * x[k];
        x[i] = s / row_i[i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= p[k * n + ii] * x[k];
        x[ii] = s / p[ii * n + ii];
    }
}

DenseMatrix ridge_solve(const DenseMatrix& r, const DenseMatrix& x, double mu) {
    if (r.rows() == 0 || r.cols() == 0) {
        throw ValidationError("ridge_solve: empty feature matrix");
    }
    if (x.cols() != r.cols()) {
        throw ValidationError("ridge_solve: feature and target sample counts differ (" +
                              std::to_string(r.cols()) + " vs " + std::to_string(x.cols()) + ")");
    }
    const std::size_t d = r.rows();
    DenseMatrix g(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = dot(r.row(i), r.row(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    DenseMatrix c(x.rows(), d);
    for (std::size_t o = 0; o < x.rows(); ++o) {
        for (std::size_t i = 0; i < d; ++i) c(o, i) = dot(x.row(o), r.row(i));
    }
    return ridge_solve_gram(g, c, mu);
}

DenseMatrix ridge_solve_gram(const DenseMatrix& g, const DenseMatrix& c, double mu) {
    const std::size_t d = g.rows();
    if (d == 0 || g.cols() != d) {
        throw ValidationError("ridge_solve_gram: Gram matrix must be square and non-empty");
    }
    if (c.cols() != d) {
        throw ValidationError("ridge_solve_gram: target statistic has " +
                              std::to_string(c.cols()) + " columns, expected " +
                              std::to_string(d));
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ValidationError("ridge_solve_gram: regularisation must be finite and >= 0");
    }
    double max_abs = 0.0;
    for (double v : g.values()) max_abs = std::max(max_abs, std::abs(v));
    double max_asym = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            max_asym = std::max(max_asym, std::abs(g(i, j) - g(j, i)));
        }
    }
    if (max_asym > 1e-9 * std::max(1.0, max_abs)) {
        throw ValidationError("ridge_solve_gram: Gram matrix is asymmetric (max deviation " +
                              std::to_string(max_asym) + ")");
    }

    DenseMatrix shifted = g;
    for (std::size_t i = 0; i < d; ++i) shifted(i, i) += mu;
    cholesky_factor(shifted);

    DenseMatrix w(c.rows(), d);
    std::vector<double> rhs(d);
    for (std::size_t o = 0; o < c.rows(); ++o) {
        std::copy_n(c.row(o).data(), d, rhs.data());
        cholesky_solve_inplace(shifted, rhs);
        std::copy_n(rhs.data(), d, w.row(o).data());
    }
    return w;
}

namespace {

/// Largest root modulus of lambda^2 - p*lambda - q = 0.
double recurrence_root_modulus(double p, double q) {
    const double disc = p * p + 4.0 * q;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return std::max(std::abs(0.5 * (p + s)), std::abs(0.5 * (p - s)));
    }
    // complex conjugate pair: |lambda|^2 = root product = -q
    return std::sqrt(-q);
}

}  // namespace

double spectral_radius(const SparseMatrix& m, double tol, std::size_t max_iters) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) {
        throw ValidationError("spectral_radius: matrix must be square and non-empty");
    }
    if (!(tol > 0.0) || max_iters == 0) {
        throw ValidationError("spectral_radius: tol must be > 0 and max_iters >= 1");
    }
    if (m.nnz() == 0) return 0.0;

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n), w2(n);

    double est = std::numeric_limits<double>::quiet_NaN();
    int stable = 0;

    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        // Two steps at a time, fitting w2 ~ p*w + q*v by least squares. Any
        // dominant eigenvalue pair — a single real lambda, a +/- pair, or a
        // complex conjugate pair — satisfies this two-term recurrence with
        // p = lambda_1 + lambda_2 and q = -lambda_1*lambda_2, so the larger
        // root modulus estimates the spectral radius without assuming the
        // dominant eigenvalue is real. (A plain Rayleigh quotient settles on
        // |lambda| cos(arg lambda) for rotating pairs: stable and wrong.)
        m.matvec(v, w);
        m.matvec(w, w2);
        const double a11 = dot(w, w), a12 = dot(w, v), a22 = dot(v, v);
        const double b1 = dot(w2, w), b2 = dot(w2, v);
        const double det = a11 * a22 - a12 * a12;
        double next_est;
        if (det > 1e-12 * a11 * a22) {
            const double p = (b1 * a22 - b2 * a12) / det;
            const double q = (a11 * b2 - a12 * b1) / det;
            next_est = recurrence_root_modulus(p, q);
        } else {
            // v and M v are (numerically) collinear: v sits on a single
            // eigendirection and the quotient is exact there.
            next_est = std::sqrt(std::abs(dot(v, w2)));
        }

        const double nrm = norm2(w2);
        if (nrm == 0.0) return 0.0;  // iterate hit the null space; e.g. nilpotent matrix
        for (std::size_t i = 0; i < n; ++i) v[i] = w2[i] / nrm;

        if (std::isfinite(next_est) && std::isfinite(est) &&
            std::abs(next_est - est) <= tol * std::max(next_est, 1e-300)) {
            if (++stable >= 2) return next_est;
        } else {
            stable = 0;
        }

        est = next_est;
    }

    throw SpectralRadiusError(
        "spectral_radius: no convergence after " + std::to_string(max_iters) +
            " iterations (last estimate " + std::to_string(est) + ")",
        est, v);
}

}  // namespace gkesn::numerics
