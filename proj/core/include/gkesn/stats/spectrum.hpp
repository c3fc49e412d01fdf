#pragma once

#include <cstdint>
#include <vector>

#include "gkesn/numerics/dense_matrix.hpp"

namespace gkesn::stats {

/// Time-averaged spatial power spectrum: e[k] is the mean of |u_hat_k|^2 over
/// the snapshots, with the 1/N-on-forward transform convention, for
/// k = 0..floor(nx/2). The remaining wavenumbers are mirror images of these.
struct Spectrum {
    std::vector<double> e;
    std::uint64_t n_samples = 0;
    std::uint64_t nx = 0;
};

/// Streaming spectrum builder: snapshots are folded in column order, so a
/// fixed feeding order gives bit-identical spectra. Parallel drivers keep one
/// accumulator per work item and merge() in a fixed order.
class SpectrumAccumulator {
public:
    explicit SpectrumAccumulator(std::uint64_t nx);

    std::uint64_t nx() const { return nx_; }
    std::uint64_t n_samples() const { return count_; }

    /// Fold every column of snapshots (nx rows) into the running average.
    void add_snapshots(const numerics::DenseMatrix& snapshots);

    void merge(const SpectrumAccumulator& other);

    /// Throws ValidationError when no snapshots were added.
    Spectrum finalize() const;

private:
    std::uint64_t nx_ = 0;
    std::vector<double> sum_;  // running sums of |u_hat_k|^2
    std::uint64_t count_ = 0;
};

/// Spectrum of one snapshot matrix in a single call.
Spectrum power_spectrum(const numerics::DenseMatrix& snapshots);

/// Parseval-weighted total energy: the half-spectrum entries are doubled
/// except k = 0 and (for even nx) the Nyquist bin, recovering the
/// time-averaged spatial mean square of the field.
double total_energy(const Spectrum& s);

/// |E_pred - E_truth| / E_truth. Throws ValidationError when the truth
/// energy is zero (or the grids differ).
double relative_energy_error(const Spectrum& predicted, const Spectrum& truth);

}  // namespace gkesn::stats
