#pragma once

#include "insole/data.hpp"
#include "insole/model.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace insole {

/// Root-mean-square error between two equal-length series.
double rmse(const Eigen::Ref<const Eigen::VectorXd>& truth, const Eigen::Ref<const Eigen::VectorXd>& pred);

/// Sample Pearson coefficient; empty when either series has zero variance.
std::optional<double> pearson(const Eigen::Ref<const Eigen::VectorXd>& truth,
                              const Eigen::Ref<const Eigen::VectorXd>& pred);

inline constexpr double kImbalanceEpsilon = 1e-3;

/// Mean over time and the four left/right pairs of |L-R|/(L+R); pairs whose
/// sum is at most `eps` contribute 0. Input is 8 x T, non-negative.
double imbalance_score(const MatXd& activations, double eps = kImbalanceEpsilon);

struct MuscleMetrics {
  std::array<double, kMuscles> rmse{};
  double rmse_mean = 0.0;
  std::array<std::optional<double>, kMuscles> pearson{};
  std::optional<double> pearson_mean;  // over muscles with a defined coefficient
  int n_frames = 0;
};

/// Per-muscle metrics over 8 x T truth/prediction series.
MuscleMetrics muscle_metrics(const MatXd& truth, const MatXd& pred);

struct EvalReport {
  MuscleMetrics overall;
  std::map<std::string, MuscleMetrics> per_motion;
  std::map<std::string, MuscleMetrics> per_user;
  int n_windows = 0;
  int n_recordings = 0;
};

/// Produces 8 x N per-frame activation estimates for a normalized recording.
using RecordingPredictor = std::function<MatXd(const SyncedRecording&)>;

/// Network inference in double precision.
class InferenceModel {
 public:
  InferenceModel(const ModelParams<float>& params, const ModelConfig& cfg);
  InferenceModel(ModelParams<double> params, const ModelConfig& cfg);

  /// (B*W) x C tokens -> (B*W) x M predictions.
  MatXd predict_tokens(const MatXd& tokens, const MatXd& bio) const;
  /// C x W -> M x W.
  MatXd predict_window(const MatXd& x, const BioVec& bio) const;
  /// Stride-1 windows; frame t >= W-1 takes the last step of the window ending
  /// at t, earlier frames take the leading steps of the first window. Returns
  /// an empty matrix for recordings shorter than W.
  MatXd predict_recording(const SyncedRecording& rec, const BioBounds& bounds = {}) const;

  const ModelConfig& config() const { return cfg_; }

 private:
  ModelParams<double> params_;
  ModelConfig cfg_;
};

RecordingPredictor network_predictor(const InferenceModel& model);
/// Predicts the ground truth itself.
RecordingPredictor oracle_predictor();
/// Predicts a fixed activation vector for every frame.
RecordingPredictor constant_predictor(const ActivationVec& value);

/// Per-muscle mean activation over normalized training recordings.
ActivationVec mean_activation(const std::vector<SyncedRecording>& recordings);

/// Evaluates over normalized recordings, concatenating per-frame series.
/// `window` only sets the n_windows count (stride-1 windows per recording).
EvalReport evaluate(const RecordingPredictor& predictor, const std::vector<SyncedRecording>& test, int window);

std::string report_to_json(const EvalReport& report);

/// Activation traces (truth vs prediction), one panel per muscle.
void write_trace_svg(const std::filesystem::path& path, const std::vector<std::int64_t>& t_ms, const MatXd& truth,
                     const MatXd& pred, const std::string& title);

}  // namespace insole
