#include "gkesn/stats/horizon.hpp"

#include <cmath>
#include <string>

#include "gkesn/errors.hpp"

namespace gkesn::stats {

double nrmse_horizon(const numerics::DenseMatrix& pred, const numerics::DenseMatrix& truth,
                     double dt_sample, double lambda_max, double threshold) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
        throw ValidationError("nrmse_horizon: prediction and truth shapes differ");
    }
    if (truth.cols() == 0 || truth.rows() == 0) {
        throw ValidationError("nrmse_horizon: empty comparison window");
    }
    if (!(dt_sample > 0.0) || !(lambda_max > 0.0) || !(threshold > 0.0)) {
        throw ValidationError(
            "nrmse_horizon: dt_sample, lambda_max and threshold must be positive");
    }

    const std::size_t rows = truth.rows();
    const std::size_t cols = truth.cols();

    double mean_sq = 0.0;
    for (std::size_t n = 0; n < cols; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < rows; ++j) acc += truth(j, n) * truth(j, n);
        mean_sq += acc;
    }
    mean_sq /= static_cast<double>(cols);
    if (!(mean_sq > 0.0)) {
        throw ValidationError("nrmse_horizon: truth window is identically zero");
    }
    const double scale = 1.0 / std::sqrt(mean_sq);

    for (std::size_t n = 0; n < cols; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < rows; ++j) {
            const double diff = pred(j, n) - truth(j, n);
            acc += diff * diff;
        }
        if (std::sqrt(acc) * scale > threshold) {
            return static_cast<double>(n) * dt_sample * lambda_max;
        }
    }
    return static_cast<double>(cols) * dt_sample * lambda_max;
}

}  // namespace gkesn::stats
