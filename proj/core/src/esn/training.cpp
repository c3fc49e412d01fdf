#include "gkesn/esn/training.hpp"

#include <string>

#include "gkesn/errors.hpp"
#include "gkesn/numerics/linalg.hpp"

namespace gkesn::esn {

TrainingAccumulator::TrainingAccumulator(std::size_t feature_dim, std::size_t n_out)
    : d_(feature_dim),
      n_out_(n_out),
      g_(feature_dim, feature_dim),
      c_(n_out, feature_dim),
      pending_f_(kBlock * feature_dim, 0.0),
      pending_y_(kBlock * n_out, 0.0),
      tf_(feature_dim * kBlock, 0.0),
      ty_(n_out * kBlock, 0.0) {
    if (d_ == 0 || n_out_ == 0) {
        throw ValidationError("TrainingAccumulator: dimensions must be positive");
    }
}

void TrainingAccumulator::add_sample(std::span<const double> features,
                                     std::span<const double> target) {
    if (features.size() != d_ || target.size() != n_out_) {
        throw ValidationError("TrainingAccumulator::add_sample: dimension mismatch");
    }
    double* f = pending_f_.data() + pending_ * d_;
    for (std::size_t i = 0; i < d_; ++i) f[i] = features[i];
    double* y = pending_y_.data() + pending_ * n_out_;
    for (std::size_t o = 0; o < n_out_; ++o) y[o] = target[o];
    ++pending_;
    ++count_;
    if (pending_ == kBlock) flush();
}

void TrainingAccumulator::flush() {
    const std::size_t p = pending_;
    if (p == 0) return;

    // Transpose the block so every inner product below runs over contiguous
    // memory and G is touched once per block instead of once per sample.
    for (std::size_t b = 0; b < p; ++b) {
        const double* f = pending_f_.data() + b * d_;
        for (std::size_t i = 0; i < d_; ++i) tf_[i * kBlock + b] = f[i];
        const double* y = pending_y_.data() + b * n_out_;
        for (std::size_t o = 0; o < n_out_; ++o) ty_[o * kBlock + b] = y[o];
    }

    for (std::size_t i = 0; i < d_; ++i) {
        const double* fi = tf_.data() + i * kBlock;
        double* grow = g_.row(i).data();
        for (std::size_t j = i; j < d_; ++j) {
            const double* fj = tf_.data() + j * kBlock;
            double s = 0.0;
            for (std::size_t b = 0; b < p; ++b) s += fi[b] * fj[b];
            grow[j] += s;
            if (j != i) g_(j, i) += s;
        }
    }
    for (std::size_t o = 0; o < n_out_; ++o) {
        const double* yo = ty_.data() + o * kBlock;
        double* crow = c_.row(o).data();
        for (std::size_t i = 0; i < d_; ++i) {
            const double* fi = tf_.data() + i * kBlock;
            double s = 0.0;
            for (std::size_t b = 0; b < p; ++b) s += yo[b] * fi[b];
            crow[i] += s;
        }
    }
    pending_ = 0;
}

void TrainingAccumulator::merge(TrainingAccumulator& other) {
    if (other.d_ != d_ || other.n_out_ != n_out_) {
        throw ValidationError("TrainingAccumulator::merge: dimension mismatch");
    }
    flush();
    other.flush();
    for (std::size_t idx = 0; idx < g_.values().size(); ++idx) {
        g_.values()[idx] += other.g_.values()[idx];
    }
    for (std::size_t idx = 0; idx < c_.values().size(); ++idx) {
        c_.values()[idx] += other.c_.values()[idx];
    }
    count_ += other.count_;
}

const numerics::DenseMatrix& TrainingAccumulator::gram() {
    flush();
    return g_;
}

const numerics::DenseMatrix& TrainingAccumulator::cross() {
    flush();
    return c_;
}

void accumulate_trajectory(Reservoir& res, TrainingAccumulator& acc,
                           const gks::Trajectory& traj) {
    const std::size_t n_t = traj.snapshots.cols();
    const std::uint64_t washout = res.config().washout;
    if (traj.snapshots.rows() != res.n_in()) {
        throw ValidationError("accumulate_trajectory: trajectory has " +
                              std::to_string(traj.snapshots.rows()) +
                              " grid points, reservoir expects " + std::to_string(res.n_in()));
    }
    if (acc.feature_dim() != res.size() || acc.n_out() != res.n_in()) {
        throw ValidationError("accumulate_trajectory: accumulator dimensions do not match");
    }
    if (n_t < washout + 2) {
        throw ValidationError("accumulate_trajectory: trajectory with " + std::to_string(n_t) +
                              " snapshots is too short for washout " + std::to_string(washout) +
                              " (need at least washout + 2)");
    }

    res.reset_state();
    std::vector<double> input(res.n_in());
    std::vector<double> target(res.n_in());
    std::vector<double> features(res.size());
    const auto& snaps = traj.snapshots;
    for (std::size_t t = 0; t + 1 < n_t; ++t) {
        for (std::size_t j = 0; j < res.n_in(); ++j) input[j] = snaps(j, t);
        res.advance(input);
        if (t < washout) continue;  // state t+1 is still inside the washout window
        feature_map(res.config(), res.state(), features);
        for (std::size_t j = 0; j < res.n_in(); ++j) target[j] = snaps(j, t + 1);
        acc.add_sample(features, target);
    }
}

ReadoutModel fit_readout(TrainingAccumulator& acc, double mu) {
    if (acc.sample_count() == 0) {
        throw ValidationError("fit_readout: no training samples accumulated");
    }
    ReadoutModel model;
    model.w_out = numerics::ridge_solve_gram(acc.gram(), acc.cross(), mu);
    model.mu = mu;
    return model;
}

}  // namespace gkesn::esn
