#include "insole/augment.hpp"

#include <doctest.h>

#include <array>

using namespace insole;

namespace {

// One channel per row; channel c ramps by `range_kg` over the window.
MatXd ramp_window(int channels, int w, double base_kg, double range_kg) {
  MatXd x(channels, w);
  for (int c = 0; c < channels; ++c) {
    for (int t = 0; t < w; ++t) x(c, t) = normalize_pressure(base_kg + range_kg * t / (w - 1));
  }
  return x;
}

int changed_channels(const MatXd& a, const MatXd& b) {
  int n = 0;
  for (Eigen::Index c = 0; c < a.rows(); ++c) n += (a.row(c).array() != b.row(c).array()).any() ? 1 : 0;
  return n;
}

TrainingWindow make_window(int i) {
  TrainingWindow w;
  w.x = ramp_window(kChannels, 20, 0.1 * (i % 50), 2.0);
  w.y = MatXd::Constant(kMuscles, 20, 0.01 * (i % 100));
  w.bio_norm = BioVec::Constant(0.3);
  w.user_id = "u" + std::to_string(i % 3);
  w.motion_label = "Squat";
  w.recording_id = i;
  return w;
}

}  // namespace

TEST_CASE("scale_augment fixed points and bounds") {
  AugmentConfig cfg;
  Rng rng(1);
  const MatXd zeros = MatXd::Constant(kChannels, 20, -1.0);  // 0 kg
  CHECK(scale_augment(zeros, cfg, rng) == zeros);

  cfg.p_high = cfg.p_low = 1.0;
  const MatXd x = ramp_window(kChannels, 20, 5.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const MatXd y = scale_augment(x, cfg, rng);
    for (Eigen::Index c = 0; c < x.rows(); ++c) {
      for (Eigen::Index t = 0; t < x.cols(); ++t) {
        const double p = denormalize_pressure(x(c, t));
        const double q = denormalize_pressure(y(c, t));
        CHECK(q >= 0.8 * p - 1e-9);
        CHECK(q <= std::min(1.2 * p, 20.0) + 1e-9);
      }
    }
  }
}

TEST_CASE("scale_augment preserves the zero set and leaves skipped channels untouched") {
  AugmentConfig cfg;
  Rng rng(5);
  MatXd x = ramp_window(kChannels, 20, 0.0, 3.0);
  x.col(0).setConstant(-1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const MatXd y = scale_augment(x, cfg, rng);
    CHECK((y.col(0).array() == -1.0).all());
    CHECK(y.minCoeff() >= -1.0);
    CHECK(y.maxCoeff() <= 1.0);
  }
  cfg.p_high = cfg.p_low = 0.0;
  CHECK(scale_augment(x, cfg, rng) == x);
}

TEST_CASE("scale_augment Monte-Carlo frequencies") {
  AugmentConfig cfg;
  Rng rng(2024);
  constexpr int kTrials = 10000;
  const MatXd small = ramp_window(1, 20, 5.0, 0.1);
  const MatXd large = ramp_window(1, 20, 5.0, 4.0);
  int n_small = 0, n_large = 0;
  for (int i = 0; i < kTrials; ++i) {
    n_small += changed_channels(small, scale_augment(small, cfg, rng));
    n_large += changed_channels(large, scale_augment(large, cfg, rng));
  }
  CHECK(std::abs(n_small / double(kTrials) - cfg.p_low) <= 0.02);
  CHECK(std::abs(n_large / double(kTrials) - cfg.p_high) <= 0.02);
}

TEST_CASE("shift_series replicates edges") {
  Eigen::RowVectorXd s(6);
  s << 1, 2, 3, 4, 5, 6;
  Eigen::RowVectorXd fwd(6), back(6);
  fwd << 1, 1, 1, 2, 3, 4;
  back << 3, 4, 5, 6, 6, 6;
  CHECK(shift_series(s, 2) == fwd);
  CHECK(shift_series(s, -2) == back);
  CHECK(shift_series(s, 0) == s);
  const Eigen::RowVectorXd c = Eigen::RowVectorXd::Constant(6, 0.4);
  for (int k = -5; k <= 5; ++k) CHECK(shift_series(c, k) == c);
}

TEST_CASE("shift_augment frequency and step distribution") {
  AugmentConfig cfg;
  Rng rng(77);
  constexpr int kTrials = 10000;
  Eigen::RowVectorXd ramp = Eigen::RowVectorXd::LinSpaced(20, -1.0, 1.0);
  MatXd x = ramp;
  int shifted = 0;
  std::array<int, 6> k_hist{};
  int forward = 0;
  for (int i = 0; i < kTrials; ++i) {
    const MatXd y = shift_augment(x, cfg, rng);
    if ((y.array() == x.array()).all()) continue;
    ++shifted;
    // The ramp is strictly increasing so the lag is recoverable from the middle sample.
    const double step = ramp(1) - ramp(0);
    const int lag = static_cast<int>(std::lround((ramp(10) - y(0, 10)) / step));
    REQUIRE(std::abs(lag) >= 1);
    REQUIRE(std::abs(lag) <= 5);
    ++k_hist[static_cast<std::size_t>(std::abs(lag))];
    forward += lag > 0 ? 1 : 0;
  }
  CHECK(std::abs(shifted / double(kTrials) - 0.5) <= 0.02);
  CHECK(std::abs(forward / double(shifted) - 0.5) <= 0.03);
  double chi2 = 0.0;
  const double expected = shifted / 5.0;
  for (int k = 1; k <= 5; ++k) chi2 += (k_hist[k] - expected) * (k_hist[k] - expected) / expected;
  CHECK(chi2 < 18.47);  // 4 dof, p = 0.001
}

TEST_CASE("augment_dataset size, identity and determinism") {
  std::vector<TrainingWindow> windows;
  for (int i = 0; i < 100; ++i) windows.push_back(make_window(i));
  AugmentConfig cfg;

  const auto out = augment_dataset(windows, cfg);
  REQUIRE(out.size() == 300);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& src = windows[i % windows.size()];
    CHECK(out[i].y == src.y);
    CHECK(out[i].user_id == src.user_id);
    CHECK(out[i].motion_label == src.motion_label);
    CHECK(out[i].bio_norm == src.bio_norm);
    CHECK(out[i].x.minCoeff() >= -1.0);
    CHECK(out[i].x.maxCoeff() <= 1.0);
  }
  for (std::size_t i = 0; i < windows.size(); ++i) CHECK(out[i].x == windows[i].x);

  const auto again = augment_dataset(windows, cfg);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(again[i].x == out[i].x);

  cfg.copies = 0;
  const auto same = augment_dataset(windows, cfg);
  REQUIRE(same.size() == windows.size());
  for (std::size_t i = 0; i < same.size(); ++i) CHECK(same[i].x == windows[i].x);

  AugmentConfig bad;
  bad.max_shift = 20;
  CHECK_THROWS_AS(bad.validate(20), ConfigError);
}
