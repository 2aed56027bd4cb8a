#pragma once

#include "insole/data.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace insole {

using Rng = std::mt19937_64;

enum class AugmentOrder { shift_then_scale, scale_then_shift };

struct AugmentConfig {
  double alpha_min = 0.8;
  double alpha_max = 1.2;
  double magnitude_threshold_kg = 0.3;
  double p_high = 0.8;
  double p_low = 0.2;
  double shift_prob = 0.5;
  int max_shift = 5;
  int copies = 2;
  std::uint64_t seed = 17;
  bool enable_scale = true;
  bool enable_shift = true;
  AugmentOrder order = AugmentOrder::shift_then_scale;

  void validate(int window_length) const;
};

/// Per-channel magnitude scaling on a normalized 36 x W window. A channel is
/// scaled with probability p_high when its kg peak-to-peak range exceeds the
/// threshold, p_low otherwise. Untouched channels are copied bit-for-bit.
MatXd scale_augment(const MatXd& x, const AugmentConfig& cfg, Rng& rng);

/// Per-channel temporal shift with edge replication.
MatXd shift_augment(const MatXd& x, const AugmentConfig& cfg, Rng& rng);

/// Shifts one series by `k` steps; positive k moves samples later in time.
Eigen::RowVectorXd shift_series(const Eigen::RowVectorXd& series, int k);

/// Returns the originals followed by `copies` augmented passes over them.
std::vector<TrainingWindow> augment_dataset(const std::vector<TrainingWindow>& windows, const AugmentConfig& cfg);

}  // namespace insole
