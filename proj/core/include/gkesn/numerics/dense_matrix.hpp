#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gkesn::numerics {

/// Dense row-major matrix of doubles.
///
/// Deliberately minimal: an owning container with shape, element access and
/// contiguous row views. All linear algebra lives in free functions so the
/// storage layout stays visible at call sites that care about it.
class DenseMatrix {
public:
    DenseMatrix() = default;

    /// rows x cols matrix, zero-initialised.
    DenseMatrix(std::size_t rows, std::size_t cols);

    /// Adopt an existing row-major value buffer. Throws ValidationError if
    /// the buffer size does not equal rows*cols or any entry is not finite.
    static DenseMatrix from_values(std::size_t rows, std::size_t cols,
                                   std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return values_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * cols_, cols_};
    }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Column j copied into a fresh vector (rows are contiguous, columns are
    /// not; snapshot consumers often want one state vector at a time).
    std::vector<double> column(std::size_t j) const;

    /// Throws ValidationError if any entry is NaN or infinite.
    void require_finite(const char* what) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// y = m * x for a dense matrix and contiguous vector. Sizes must match.
void dense_matvec(const DenseMatrix& m, std::span<const double> x, std::span<double> y);

}  // namespace gkesn::numerics
