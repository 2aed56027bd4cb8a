#include "insole/stream.hpp"

namespace insole {

StreamState::StreamState(const InferenceModel& model, const BioVec& bio_norm)
    : model_(&model),
      bio_(bio_norm),
      window_(model.config().window),
      ring_(MatXd::Zero(model.config().n_channels, model.config().window)),
      ordered_(ring_) {}

void StreamState::reset() {
  ring_.setZero();
  count_ = 0;
}

std::optional<ActivationVec> StreamState::push(const PressureFrame& frame) {
  return push_normalized(normalize_pressure_frame(frame.stacked()));
}

std::optional<ActivationVec> StreamState::push_normalized(const PressureVec& frame) {
  ring_.col(static_cast<Eigen::Index>(count_ % window_)) = frame;
  ++count_;
  if (count_ < window_) return std::nullopt;
  // Oldest frame sits right after the newest one in the ring.
  const auto head = static_cast<Eigen::Index>(count_ % window_);
  ordered_.leftCols(window_ - head) = ring_.rightCols(window_ - head);
  if (head > 0) ordered_.rightCols(head) = ring_.leftCols(head);
  const MatXd pred = model_->predict_window(ordered_, bio_);
  return ActivationVec(pred.col(window_ - 1));
}

}  // namespace insole
