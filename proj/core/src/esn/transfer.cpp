#include "gkesn/esn/transfer.hpp"

#include <cmath>
#include <string>

#include "gkesn/errors.hpp"
#include "gkesn/numerics/linalg.hpp"

namespace gkesn::esn {

ReadoutModel transfer_update(const ReadoutModel& model, TrainingAccumulator& tl_acc,
                             double alpha) {
    if (tl_acc.sample_count() == 0) {
        throw ValidationError("transfer_update: no target-regime samples accumulated");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("transfer_update: alpha must be finite and >= 0");
    }
    const numerics::DenseMatrix& g = tl_acc.gram();
    const numerics::DenseMatrix& c = tl_acc.cross();
    const std::size_t d = g.rows();
    const std::size_t n_out = c.rows();
    if (model.w_out.rows() != n_out || model.w_out.cols() != d) {
        throw ValidationError("transfer_update: readout is " +
                              std::to_string(model.w_out.rows()) + "x" +
                              std::to_string(model.w_out.cols()) + " but statistics expect " +
                              std::to_string(n_out) + "x" + std::to_string(d));
    }

    // residual statistic C - W G, the gradient part the correction must close
    numerics::DenseMatrix residual(n_out, d);
    const double* w = model.w_out.data();
    const double* gp = g.data();
    for (std::size_t o = 0; o < n_out; ++o) {
        double* rrow = residual.row(o).data();
        const double* crow = c.row(o).data();
        for (std::size_t j = 0; j < d; ++j) rrow[j] = crow[j];
        for (std::size_t i = 0; i < d; ++i) {
            const double wi = w[o * d + i];
            if (wi == 0.0) continue;
            const double* grow = gp + i * d;
            for (std::size_t j = 0; j < d; ++j) rrow[j] -= wi * grow[j];
        }
    }

    ReadoutModel updated;
    updated.w_out = numerics::ridge_solve_gram(g, residual, alpha);
    double* out = updated.w_out.data();
    for (std::size_t idx = 0; idx < updated.w_out.values().size(); ++idx) {
        out[idx] += w[idx];
    }
    updated.mu = model.mu;
    updated.provenance = model.provenance;
    return updated;
}

}  // namespace gkesn::esn
