#pragma once

// Independent reference implementations for the test suite. Everything here
// is written for clarity over speed (naive transforms, long-double
// elimination, library eigen-solvers) so library results can be checked
// against arithmetic that shares no code with the implementation under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

/// Naive O(n^2) discrete Fourier transform, unnormalised:
/// X_k = sum_j x_j exp(-2 pi i j k / n).
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<long double> sum = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            const long double angle =
                -two_pi * static_cast<long double>(j) * static_cast<long double>(k) /
                static_cast<long double>(n);
            const std::complex<long double> w(std::cos(angle), std::sin(angle));
            sum += std::complex<long double>(x[j]) * w;
        }
        out[k] = std::complex<double>(static_cast<double>(sum.real()),
                                      static_cast<double>(sum.imag()));
    }
    return out;
}

inline std::vector<std::complex<double>> naive_dft_real(const std::vector<double>& x) {
    std::vector<std::complex<double>> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i];
    return naive_dft(c);
}

/// Dense linear solve by Gaussian elimination with partial pivoting in long
/// double. a is row-major n x n.
inline std::vector<double> gauss_solve(std::vector<long double> a, std::vector<long double> b,
                                       std::size_t n) {
    if (a.size() != n * n || b.size() != n) throw std::invalid_argument("gauss_solve: shape");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        if (a[pivot * n + col] == 0.0L) throw std::runtime_error("gauss_solve: singular");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = a[r * n + col] / a[col * n + col];
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        long double sum = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) {
            sum -= a[ri * n + c] * static_cast<long double>(x[c]);
        }
        x[ri] = static_cast<double>(sum / a[ri * n + ri]);
    }
    return x;
}

/// Circulant matrix-vector solve through explicit dense assembly + Gauss.
/// first_column defines the matrix: M[i][j] = first_column[(i - j) mod n].
inline std::vector<double> circulant_solve_dense(const std::vector<double>& first_column,
                                                 const std::vector<double>& rhs) {
    const std::size_t n = first_column.size();
    std::vector<long double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = first_column[(i + n - j) % n];
        }
    }
    std::vector<long double> b(rhs.begin(), rhs.end());
    return gauss_solve(std::move(a), std::move(b), n);
}

/// Spectral radius of a dense row-major matrix via Eigen's general
/// eigenvalue solver.
inline double eigen_spectral_radius(const std::vector<double>& values, std::size_t n) {
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(j)) =
            values[i * n + j];
    }
    const Eigen::VectorXcd eig = m.eigenvalues();
    double rho = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) rho = std::max(rho, std::abs(eig[i]));
    return rho;
}

/// Ridge solve W = C (G + mu I)^{-1} row by row through Eigen's LDLT.
inline std::vector<double> eigen_ridge_solve(const std::vector<double>& g,
                                             const std::vector<double>& c, std::size_t d,
                                             std::size_t n_out, double mu) {
    Eigen::MatrixXd gm(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            gm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[i * d + j];
        }
    }
    gm += mu * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                         static_cast<Eigen::Index>(d));
    const auto solver = gm.ldlt();
    std::vector<double> w(n_out * d);
    Eigen::VectorXd row(d);
    for (std::size_t r = 0; r < n_out; ++r) {
        for (std::size_t j = 0; j < d; ++j) row(static_cast<Eigen::Index>(j)) = c[r * d + j];
        const Eigen::VectorXd sol = solver.solve(row);
        for (std::size_t j = 0; j < d; ++j) w[r * d + j] = sol(static_cast<Eigen::Index>(j));
    }
    return w;
}

}  // namespace oracles
