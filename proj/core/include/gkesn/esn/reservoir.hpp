#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gkesn/numerics/dense_matrix.hpp"
#include "gkesn/numerics/sparse_matrix.hpp"

namespace gkesn::esn {

/// Echo-state-network hyperparameters.
struct EsnConfig {
    std::uint64_t reservoir_size = 5000;  // D
    double beta1 = 0.01;                  // input weight scale, W_in ~ U[-beta1, beta1]
    double beta2 = 0.1;                   // spectral radius of the recurrent matrix
    double density = 0.02;                // fraction of nonzero recurrent weights
    double mu = 5e-6;                     // default ridge regularisation for readout fits
    std::uint64_t seed = 1;               // master seed for weight draws
    std::uint64_t washout = 100;          // reservoir steps discarded before regression
    bool quadratic_features = true;       // apply the even-component squaring map phi

    /// Nonzero count of the recurrent matrix: round(density * D^2).
    std::uint64_t recurrent_nnz() const;

    void validate() const;
};

/// Even-component squaring feature map: with 1-based indexing, components at
/// even positions are squared, odd positions pass through. For example
/// phi([1,2,3,4]) = [1,4,3,16]. in and out must have equal length and may
/// alias.
void phi(std::span<const double> in, std::span<double> out);

/// phi when config.quadratic_features is set, identity copy otherwise.
void feature_map(const EsnConfig& config, std::span<const double> in, std::span<double> out);

/// A built reservoir: fixed random recurrent and input weights plus the
/// evolving state r.
///
/// The weights are immutable after construction; advance/reset_state mutate
/// only the state vector, so parallel drivers should give each worker its own
/// copy (cheap next to any actual workload).
class Reservoir {
public:
    Reservoir(EsnConfig config, std::size_t n_in, numerics::SparseMatrix a,
              numerics::DenseMatrix w_in);

    const EsnConfig& config() const { return config_; }
    std::size_t size() const { return config_.reservoir_size; }
    std::size_t n_in() const { return n_in_; }
    const numerics::SparseMatrix& a() const { return a_; }
    const numerics::DenseMatrix& w_in() const { return w_in_; }
    const std::vector<double>& state() const { return state_; }

    void reset_state();
    void set_state(std::span<const double> r);

    /// r <- tanh(A r + W_in x); x must have n_in entries.
    void advance(std::span<const double> x);

private:
    EsnConfig config_;
    std::size_t n_in_ = 0;
    numerics::SparseMatrix a_;
    numerics::DenseMatrix w_in_;
    std::vector<double> state_;
    std::vector<double> scratch_;
};

/// Draw the weights for config and wire them into a Reservoir:
///
///   W_in  — D x n_in, entries U[-beta1, beta1], drawn row-major;
///   W0    — exactly round(density * D^2) distinct positions drawn uniformly
///           (rejection on repeats), each with a U[-1, 1] value;
///   A     — beta2 * W0 / rho(W0), the spectral radius from power iteration.
///
/// Throws NumericalError if rho(W0) is numerically zero (advice: reseed).
Reservoir build_reservoir(const EsnConfig& config, std::size_t n_in);

}  // namespace gkesn::esn
