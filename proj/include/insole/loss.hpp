#pragma once

#include "insole/common.hpp"

namespace insole {

// Losses over an M x W prediction/target pair (muscles by time).

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar loss_mse(const Eigen::MatrixBase<DerivedA>& pred, const Eigen::MatrixBase<DerivedB>& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) throw ConfigError("loss_mse: shape mismatch");
  if (pred.size() == 0) throw ConfigError("loss_mse: empty input");
  return (pred - truth).squaredNorm() / static_cast<typename DerivedA::Scalar>(pred.size());
}

/// Mean squared mismatch between consecutive-step deltas.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar loss_smooth(const Eigen::MatrixBase<DerivedA>& pred,
                                      const Eigen::MatrixBase<DerivedB>& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) throw ConfigError("loss_smooth: shape mismatch");
  const auto w = pred.cols();
  if (w < 2) throw ConfigError("loss_smooth: need at least two time steps");
  const auto r = pred - truth;
  const auto d = r.rightCols(w - 1) - r.leftCols(w - 1);
  return d.squaredNorm() / static_cast<typename DerivedA::Scalar>((w - 1) * pred.rows());
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar loss_total(const Eigen::MatrixBase<DerivedA>& pred, const Eigen::MatrixBase<DerivedB>& truth,
                                     double lambda = 0.1) {
  if (lambda < 0.0) throw ConfigError("loss_total: lambda must be >= 0");
  using S = typename DerivedA::Scalar;
  const S mse = loss_mse(pred, truth);
  if (lambda == 0.0) return mse;
  return mse + static_cast<S>(lambda) * loss_smooth(pred, truth);
}

/// Batch mean of loss_total over token-packed windows ((B*W) x M rows ordered
/// window-major). Writes dLoss/dPred into `grad` when non-null.
template <typename Scalar>
Scalar batch_loss(const Mat<Scalar>& pred, const Mat<Scalar>& truth, int window, double lambda, Mat<Scalar>* grad) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) throw ConfigError("batch_loss: shape mismatch");
  if (lambda < 0.0) throw ConfigError("batch_loss: lambda must be >= 0");
  if (window < 2 || pred.rows() % window != 0) throw ConfigError("batch_loss: bad window length");
  const auto batch = pred.rows() / window;
  const auto m = pred.cols();
  const Mat<Scalar> r = pred - truth;
  const Scalar mse_scale = Scalar(1) / static_cast<Scalar>(window * m * batch);
  const Scalar smooth_scale = static_cast<Scalar>(lambda) / static_cast<Scalar>((window - 1) * m * batch);

  Scalar total = r.squaredNorm() * mse_scale;
  if (grad) *grad = (Scalar(2) * mse_scale) * r;
  if (lambda == 0.0) return total;

  Scalar smooth = 0;
  for (Eigen::Index b = 0; b < batch; ++b) {
    const auto rb = r.middleRows(b * window, window);
    const Mat<Scalar> d = rb.bottomRows(window - 1) - rb.topRows(window - 1);
    smooth += d.squaredNorm();
    if (grad) {
      auto gb = grad->middleRows(b * window, window);
      gb.bottomRows(window - 1) += (Scalar(2) * smooth_scale) * d;
      gb.topRows(window - 1) -= (Scalar(2) * smooth_scale) * d;
    }
  }
  return total + smooth * smooth_scale;
}

}  // namespace insole
