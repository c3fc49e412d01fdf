#include "gkesn/esn/predict.hpp"

#include <string>
#include <vector>

#include "gkesn/errors.hpp"

namespace gkesn::esn {

numerics::DenseMatrix predict(Reservoir& res, const ReadoutModel& model,
                              const numerics::DenseMatrix& spinup, std::size_t n_steps) {
    const std::size_t n_in = res.n_in();
    const std::size_t d = res.size();
    if (spinup.rows() != n_in || spinup.cols() == 0) {
        throw ValidationError("predict: spin-up must be a non-empty matrix with " +
                              std::to_string(n_in) + " rows");
    }
    if (model.w_out.rows() != n_in || model.w_out.cols() != d) {
        throw ValidationError("predict: readout is " + std::to_string(model.w_out.rows()) + "x" +
                              std::to_string(model.w_out.cols()) + ", expected " +
                              std::to_string(n_in) + "x" + std::to_string(d));
    }

    res.reset_state();
    std::vector<double> input(n_in);
    for (std::size_t s = 0; s < spinup.cols(); ++s) {
        for (std::size_t j = 0; j < n_in; ++j) input[j] = spinup(j, s);
        res.advance(input);
    }

    numerics::DenseMatrix out(n_in, n_steps);
    if (n_steps == 0) return out;

    std::vector<double> features(d);
    std::vector<double> y(n_in);
    for (std::size_t k = 0; k < n_steps; ++k) {
        if (k > 0) res.advance(input);
        feature_map(res.config(), res.state(), features);
        numerics::dense_matvec(model.w_out, features, y);
        for (std::size_t j = 0; j < n_in; ++j) {
            out(j, k) = y[j];
            input[j] = y[j];  // feed the prediction back on the next step
        }
    }
    return out;
}

}  // namespace gkesn::esn
