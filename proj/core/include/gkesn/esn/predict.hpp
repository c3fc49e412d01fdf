#pragma once

#include <cstddef>

#include "gkesn/esn/reservoir.hpp"
#include "gkesn/esn/training.hpp"
#include "gkesn/numerics/dense_matrix.hpp"

namespace gkesn::esn {

/// Closed-loop prediction.
///
/// The reservoir state is reset and driven through every spin-up column
/// (teacher forcing). Output column 0 is read out immediately afterwards, so
/// with spin-up columns 0..S-1 of a truth trajectory, output column k lines
/// up with truth column S+k; from column 1 onwards each prediction is fed
/// back as the next input.
///
/// spinup must have at least one column and n_steps may be zero (empty
/// result).
numerics::DenseMatrix predict(Reservoir& res, const ReadoutModel& model,
                              const numerics::DenseMatrix& spinup, std::size_t n_steps);

}  // namespace gkesn::esn
