#include "insole/augment.hpp"

#include <algorithm>

namespace insole {

void AugmentConfig::validate(int window_length) const {
  if (!(alpha_min > 0.0 && alpha_min <= alpha_max)) throw ConfigError("augment: need 0 < alpha_min <= alpha_max");
  for (double p : {p_high, p_low, shift_prob}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("augment: probabilities must lie in [0,1]");
  }
  if (max_shift < 1 || max_shift >= window_length) throw ConfigError("augment: need 1 <= max_shift < W");
  if (copies < 0) throw ConfigError("augment: copies must be >= 0");
}

MatXd scale_augment(const MatXd& x, const AugmentConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> alpha_dist(cfg.alpha_min, cfg.alpha_max);
  MatXd out = x;
  for (Eigen::Index c = 0; c < x.rows(); ++c) {
    const double range_kg = (x.row(c).maxCoeff() - x.row(c).minCoeff()) * 0.5 * kMaxPressureKg;
    const double p = range_kg > cfg.magnitude_threshold_kg ? cfg.p_high : cfg.p_low;
    if (coin(rng) >= p) continue;
    const double alpha = alpha_dist(rng);
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
      const double kg = std::clamp(denormalize_pressure(x(c, t)) * alpha, 0.0, kMaxPressureKg);
      out(c, t) = normalize_pressure(kg);
    }
  }
  return out;
}

Eigen::RowVectorXd shift_series(const Eigen::RowVectorXd& series, int k) {
  const auto n = series.size();
  Eigen::RowVectorXd out(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::Index src = std::clamp<Eigen::Index>(t - k, 0, n - 1);
    out(t) = series(src);
  }
  return out;
}

MatXd shift_augment(const MatXd& x, const AugmentConfig& cfg, Rng& rng) {
  if (cfg.max_shift >= x.cols()) throw ConfigError("shift_augment: max_shift must be < W");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> steps(1, cfg.max_shift);
  std::bernoulli_distribution forward(0.5);
  MatXd out = x;
  for (Eigen::Index c = 0; c < x.rows(); ++c) {
    if (coin(rng) >= cfg.shift_prob) continue;
    const int k = steps(rng);
    out.row(c) = shift_series(x.row(c), forward(rng) ? k : -k);
  }
  return out;
}

std::vector<TrainingWindow> augment_dataset(const std::vector<TrainingWindow>& windows, const AugmentConfig& cfg) {
  std::vector<TrainingWindow> out(windows);
  if (windows.empty() || cfg.copies == 0) return out;
  cfg.validate(static_cast<int>(windows.front().x.cols()));
  out.reserve(windows.size() * static_cast<std::size_t>(cfg.copies + 1));
  for (int copy = 0; copy < cfg.copies; ++copy) {
    for (std::size_t i = 0; i < windows.size(); ++i) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(copy), static_cast<std::uint32_t>(i)};
      Rng rng(seq);
      TrainingWindow w = windows[i];
      auto apply_scale = [&] {
        if (cfg.enable_scale) w.x = scale_augment(w.x, cfg, rng);
      };
      auto apply_shift = [&] {
        if (cfg.enable_shift) w.x = shift_augment(w.x, cfg, rng);
      };
      if (cfg.order == AugmentOrder::shift_then_scale) {
        apply_shift();
        apply_scale();
      } else {
        apply_scale();
        apply_shift();
      }
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace insole
