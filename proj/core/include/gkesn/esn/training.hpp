#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gkesn/esn/reservoir.hpp"
#include "gkesn/gks/solver.hpp"
#include "gkesn/numerics/dense_matrix.hpp"

namespace gkesn::esn {

/// Trained linear readout: predictions are W_out * feature_map(r).
struct ReadoutModel {
    numerics::DenseMatrix w_out;  // n_out x D
    double mu = 0.0;              // regularisation the fit used
    std::string provenance;       // human-readable training history
};

/// Streaming sufficient statistics for the ridge fit:
///
///   G = sum_t f_t f_t^T,    C = sum_t y_t f_t^T
///
/// over feature/target pairs (f_t, y_t). Neither the feature matrix nor the
/// targets are ever materialised, so training memory is O(D^2) regardless of
/// sample count.
///
/// Samples are folded into G in blocks of kBlock in arrival order, which
/// fixes the floating-point summation order: a given sample sequence always
/// produces bit-identical statistics. Parallel drivers accumulate one
/// instance per work item and merge() them in a fixed order.
class TrainingAccumulator {
public:
    static constexpr std::size_t kBlock = 32;

    TrainingAccumulator(std::size_t feature_dim, std::size_t n_out);

    std::size_t feature_dim() const { return d_; }
    std::size_t n_out() const { return n_out_; }
    std::uint64_t sample_count() const { return count_; }

    void add_sample(std::span<const double> features, std::span<const double> target);

    /// Fold any buffered samples into G and C.
    void flush();

    /// Elementwise-add other's statistics into this one (both sides are
    /// flushed first). Addition order is the caller's merge order.
    void merge(TrainingAccumulator& other);

    /// Statistics access; flushes pending samples.
    const numerics::DenseMatrix& gram();
    const numerics::DenseMatrix& cross();

private:
    std::size_t d_ = 0;
    std::size_t n_out_ = 0;
    numerics::DenseMatrix g_;          // D x D, kept exactly symmetric
    numerics::DenseMatrix c_;          // n_out x D
    std::vector<double> pending_f_;    // kBlock x D, row per sample
    std::vector<double> pending_y_;    // kBlock x n_out
    std::size_t pending_ = 0;
    std::uint64_t count_ = 0;
    std::vector<double> tf_;           // D x kBlock transposed scratch
    std::vector<double> ty_;           // n_out x kBlock transposed scratch
};

/// Drive the reservoir along a trajectory and collect training pairs.
///
/// From zero state, snapshot t is fed in and the resulting state is paired
/// with snapshot t+1; the first config.washout reservoir steps are discarded.
/// A trajectory with N snapshots therefore contributes N - 1 - washout
/// samples and must satisfy N >= washout + 2.
void accumulate_trajectory(Reservoir& res, TrainingAccumulator& acc,
                           const gks::Trajectory& traj);

/// Ridge regression on the accumulated statistics:
///
///   W_out = C (G + mu I)^{-1}
///
/// solved through a Cholesky factorisation (no explicit inverse). The
/// provenance field of the result is left empty for the caller to fill.
ReadoutModel fit_readout(TrainingAccumulator& acc, double mu);

}  // namespace gkesn::esn
