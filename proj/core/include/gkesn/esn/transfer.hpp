#pragma once

#include "gkesn/esn/training.hpp"

namespace gkesn::esn {

/// Closed-form output-layer transfer between regimes.
///
/// Given statistics (G_tl, C_tl) accumulated from a small amount of
/// target-regime data with the SAME reservoir the source model was trained
/// on, the readout correction minimising
///
///   |(W + dW) R_tl - X_tl|^2 + alpha |dW|^2
///
/// is dW = (C_tl - W G_tl)(G_tl + alpha I)^{-1}; the transferred model is
/// W + dW. The reservoir weights never change — only the readout moves.
///
/// With W = 0 this reduces exactly to fit_readout with mu = alpha.
ReadoutModel transfer_update(const ReadoutModel& model, TrainingAccumulator& tl_acc,
                             double alpha);

}  // namespace gkesn::esn
