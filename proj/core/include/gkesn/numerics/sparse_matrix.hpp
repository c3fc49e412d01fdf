#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gkesn::numerics {

/// One nonzero of a sparse matrix.
struct SparseEntry {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    double value = 0.0;
};

/// Sparse matrix in coordinate form, entries sorted by (row, col) and unique.
///
/// The coordinate list is the canonical (and serialised) representation; a
/// compressed row index is built once at construction to make matvec cheap.
class SparseMatrix {
public:
    SparseMatrix() = default;

    /// Validates shape, bounds, duplicates and finiteness; sorts entries by
    /// (row, col). `max_density` caps nnz/(rows*cols); the default allows a
    /// full matrix.
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries,
                 double max_density = 1.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return entries_.size(); }
    double density() const {
        return rows_ == 0 || cols_ == 0
                   ? 0.0
                   : static_cast<double>(entries_.size()) /
                         (static_cast<double>(rows_) * static_cast<double>(cols_));
    }

    const std::vector<SparseEntry>& entries() const { return entries_; }

    /// Scale every value in place (structure unchanged).
    void scale(double factor);

    /// y = A * x using the compressed row index. Sizes must match.
    void matvec(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<SparseEntry> entries_;     // sorted by (row, col)
    std::vector<std::size_t> row_start_;   // rows_+1 offsets into entries_
};

}  // namespace gkesn::numerics
