#include "gkesn/numerics/dense_matrix.hpp"

#include <cmath>
#include <string>

#include "gkesn/errors.hpp"

namespace gkesn::numerics {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DenseMatrix DenseMatrix::from_values(std::size_t rows, std::size_t cols,
                                     std::vector<double> values) {
    if (values.size() != rows * cols) {
        throw ValidationError("DenseMatrix: buffer of " + std::to_string(values.size()) +
                              " values does not fill " + std::to_string(rows) + "x" +
                              std::to_string(cols));
    }
    DenseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.values_ = std::move(values);
    m.require_finite("DenseMatrix::from_values");
    return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = values_[i * cols_ + j];
    return out;
}

void DenseMatrix::require_finite(const char* what) const {
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        if (!std::isfinite(values_[idx])) {
            throw ValidationError(std::string(what) + ": non-finite entry at (" +
                                  std::to_string(idx / cols_) + ", " +
                                  std::to_string(idx % cols_) + ")");
        }
    }
}

void dense_matvec(const DenseMatrix& m, std::span<const double> x, std::span<double> y) {
    if (x.size() != m.cols() || y.size() != m.rows()) {
        throw ValidationError("dense_matvec: size mismatch");
    }
    const double* a = m.data();
    const std::size_t cols = m.cols();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = a + i * cols;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

}  // namespace gkesn::numerics
