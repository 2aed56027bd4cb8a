#pragma once

#include "insole/augment.hpp"
#include "insole/data.hpp"
#include "insole/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace insole {

struct AblationFlags {
  bool no_mask = false;
  bool no_film = false;
  bool no_scale_aug = false;
  bool no_shift_aug = false;
  bool no_smooth_loss = false;
};

struct TrainConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
  int batch_size = 512;
  int epochs = 50;
  double val_fraction = 0.1;  // of recordings, held in for checkpoint selection
  bool val_by_user = false;   // hold in whole users instead of recordings
  double bio_noise = 0.0;     // sd of Gaussian jitter on normalized bio during training
  std::uint64_t seed = 1;
  AblationFlags ablation;

  void validate() const;
};

/// Model config with the ablation switches applied.
ModelConfig apply_ablation(ModelConfig cfg, const AblationFlags& flags);
AugmentConfig apply_ablation(AugmentConfig cfg, const AblationFlags& flags);
double effective_lambda(const ModelConfig& cfg, const AblationFlags& flags);

// ---- splits ----------------------------------------------------------------

enum class SplitMode { leave_one_user_out, leave_one_motion_out, random };

struct SplitSpec {
  SplitMode mode = SplitMode::leave_one_user_out;
  std::string held_out;
  double test_fraction = 0.2;  // random mode, by recording
  std::uint64_t seed = 0;

  /// Parses "louo:<user>", "lomo:<motion>" or "random:<fraction>".
  static SplitSpec parse(const std::string& text);
  std::string to_string() const;
};

template <typename T>
struct Partition {
  std::vector<T> train;
  std::vector<T> test;
};

/// Exact disjoint partition. Windows are tagged with their provenance.
Partition<TrainingWindow> split(const std::vector<TrainingWindow>& windows, const SplitSpec& spec);
Partition<SyncedRecording> split(const std::vector<SyncedRecording>& recordings, const SplitSpec& spec);

// ---- optimization ----------------------------------------------------------

/// Adam with decoupled weight decay on weight matrices only.
template <typename Scalar>
class AdamW {
 public:
  AdamW(const ModelConfig& cfg, const TrainConfig& train);
  void step(ModelParams<Scalar>& params, const ModelParams<Scalar>& grads);
  std::int64_t steps() const { return t_; }

 private:
  TrainConfig cfg_;
  ModelParams<Scalar> m_, v_;
  std::int64_t t_ = 0;
};

template <typename Scalar>
class Trainer {
 public:
  Trainer(const ModelConfig& model, const TrainConfig& train);
  Trainer(ModelParams<Scalar> params, const ModelConfig& model, const TrainConfig& train);

  /// One optimizer step on the batch; returns the pre-update batch loss.
  double step(const std::vector<const TrainingWindow*>& batch);
  /// Mean loss over the windows in evaluation mode.
  double loss(const std::vector<TrainingWindow>& windows) const;

  const ModelParams<Scalar>& params() const { return params_; }
  ModelParams<Scalar>& params() { return params_; }
  const ModelConfig& model_config() const { return model_; }
  double lambda() const { return lambda_; }

 private:
  ModelConfig model_;
  TrainConfig train_;
  double lambda_;
  ModelParams<Scalar> params_;
  AdamW<Scalar> optimizer_;
  std::mt19937_64 dropout_rng_;
  std::mt19937_64 bio_rng_;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;  // NaN when no validation slice exists
};

struct FitResult {
  ModelParams<float> params;  // best epoch
  ModelConfig model;          // with ablations applied
  std::vector<EpochStats> trace;
  int best_epoch = 0;
  std::int64_t steps = 0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

struct ValidationSplit {
  std::vector<TrainingWindow> fit;
  std::vector<TrainingWindow> val;
};

ValidationSplit validation_split(const std::vector<TrainingWindow>& train, const TrainConfig& cfg);

/// Trains on `train` (augmented internally after carving out the validation
/// recordings). Throws ConfigError when a test-tagged window is passed and
/// TrainingError when the loss diverges.
FitResult fit(const std::vector<TrainingWindow>& train, const TrainConfig& cfg, const ModelConfig& model,
              const AugmentConfig& augment, const EpochCallback& on_epoch = {});

void write_loss_trace_csv(const std::filesystem::path& path, const std::vector<EpochStats>& trace);

}  // namespace insole
