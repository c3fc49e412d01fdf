#pragma once

#include "gkesn/numerics/dense_matrix.hpp"

namespace gkesn::stats {

/// Valid-prediction horizon in Lyapunov times.
///
/// Column n of pred and truth are states at time n * dt_sample. The
/// normalised error of column n is
///
///   eps_n = |pred_n - truth_n|_2 / sqrt(mean_m |truth_m|_2^2)
///
/// (the denominator is the root-mean-square column norm over the whole
/// comparison window, so an identically-zero prediction scores eps ~ 1).
/// Returns n * dt_sample * lambda_max for the first n with eps_n > threshold,
/// or the full window length in Lyapunov times when the error never crosses.
///
/// pred and truth must have identical shape; throws ValidationError when the
/// truth window is identically zero.
double nrmse_horizon(const numerics::DenseMatrix& pred, const numerics::DenseMatrix& truth,
                     double dt_sample, double lambda_max, double threshold);

}  // namespace gkesn::stats
