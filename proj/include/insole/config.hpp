#pragma once

#include "insole/augment.hpp"
#include "insole/model.hpp"
#include "insole/synth.hpp"
#include "insole/train.hpp"

#include <json.hpp>

#include <filesystem>

namespace insole {

struct DataConfig {
  int train_stride = 10;
  int eval_stride = 1;
  BioBounds bio_bounds;
};

/// Everything a `train`/`eval`/`gen` run depends on. Missing keys keep their
/// defaults.
struct ExperimentConfig {
  DataConfig data;
  AugmentConfig augment;
  ModelConfig model;
  TrainConfig train;
  SplitSpec split;
  SynthConfig synth;

  void validate() const;
};

nlohmann::json to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
void write_experiment_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

}  // namespace insole
