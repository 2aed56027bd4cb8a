#pragma once

#include "insole/data.hpp"
#include "insole/eval.hpp"

#include <optional>

namespace insole {

/// Sliding-window inference over a live frame stream. Keeps the last W
/// normalized frames in a ring buffer and re-runs the network on every new
/// frame once the buffer is full.
class StreamState {
 public:
  StreamState(const InferenceModel& model, const BioVec& bio_norm);

  /// Returns the activation estimate for the newest frame, or nothing while
  /// fewer than W frames have been seen.
  std::optional<ActivationVec> push(const PressureFrame& frame);
  std::optional<ActivationVec> push_normalized(const PressureVec& frame);

  std::int64_t frames_seen() const { return count_; }
  int buffered() const { return static_cast<int>(std::min<std::int64_t>(count_, window_)); }
  void reset();

 private:
  const InferenceModel* model_;
  BioVec bio_;
  int window_;
  MatXd ring_;  // C x W, column (count % W) is overwritten next
  MatXd ordered_;
  std::int64_t count_ = 0;
};

}  // namespace insole
