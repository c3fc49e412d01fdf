#include "gkesn/numerics/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gkesn/errors.hpp"

namespace gkesn::numerics {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<SparseEntry> entries, double max_density)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) {
        throw ValidationError("SparseMatrix: dimensions must be positive");
    }
    std::sort(entries_.begin(), entries_.end(), [](const SparseEntry& a, const SparseEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const SparseEntry& e = entries_[k];
        if (e.row >= rows_ || e.col >= cols_) {
            throw ValidationError("SparseMatrix: entry (" + std::to_string(e.row) + ", " +
                                  std::to_string(e.col) + ") outside " + std::to_string(rows_) +
                                  "x" + std::to_string(cols_));
        }
        if (!std::isfinite(e.value)) {
            throw ValidationError("SparseMatrix: non-finite value at (" + std::to_string(e.row) +
                                  ", " + std::to_string(e.col) + ")");
        }
        if (k > 0 && entries_[k - 1].row == e.row && entries_[k - 1].col == e.col) {
            throw ValidationError("SparseMatrix: duplicate entry at (" + std::to_string(e.row) +
                                  ", " + std::to_string(e.col) + ")");
        }
    }
    if (density() > max_density) {
        throw ValidationError("SparseMatrix: density " + std::to_string(density()) +
                              " exceeds bound " + std::to_string(max_density));
    }
    row_start_.assign(rows_ + 1, 0);
    for (const SparseEntry& e : entries_) ++row_start_[e.row + 1];
    for (std::size_t r = 0; r < rows_; ++r) row_start_[r + 1] += row_start_[r];
}

void SparseMatrix::scale(double factor) {
    if (!std::isfinite(factor)) throw ValidationError("SparseMatrix::scale: non-finite factor");
    for (SparseEntry& e : entries_) e.value *= factor;
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    if (x.size() != cols_ || y.size() != rows_) {
        throw ValidationError("SparseMatrix::matvec: size mismatch");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            acc += entries_[k].value * x[entries_[k].col];
        }
        y[r] = acc;
    }
}

}  // namespace gkesn::numerics
