#pragma once

#include "insole/common.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace insole {

using FootVec = Eigen::Matrix<double, kChannelsPerFoot, 1>;

struct PressureFrame {
  std::int64_t t_ms = 0;
  FootVec left = FootVec::Zero();   // kg
  FootVec right = FootVec::Zero();  // kg

  PressureVec stacked() const;
};

struct EmgSample {
  std::int64_t t_ms = 0;
  ActivationVec channels = ActivationVec::Zero();  // µV, canonical muscle order
};

struct BioProfile {
  double weight_kg = 70.0;
  double height_cm = 170.0;
  double age_years = 30.0;
  double shoe_size_eu = 41.0;
  int gender_code = 0;
};

/// Min-max bounds for bio normalization; inputs outside are clamped.
struct BioBounds {
  double weight_min = 39.0, weight_max = 83.0;
  double height_min = 150.0, height_max = 186.0;
  double age_min = 22.0, age_max = 37.0;
  double shoe_min = 35.0, shoe_max = 47.0;
};

BioVec normalize_bio(const BioProfile& bio, const BioBounds& bounds = {});

enum class Units { physical, normalized };

/// Pressure and activation on a shared 20 Hz clock. Column j of `pressure` and
/// `activation` belongs to `t_ms[j]`.
struct SyncedRecording {
  std::vector<std::int64_t> t_ms;
  MatXd pressure;    // 36 x N, kg or [-1,1]
  MatXd activation;  // 8 x N, µV or [0,1]
  std::string user_id;
  std::string motion_label;
  BioProfile bio;
  Units units = Units::physical;
  int recording_id = 0;

  int frames() const { return static_cast<int>(t_ms.size()); }
};

enum class Provenance : std::uint8_t { unassigned, train, test };

struct TrainingWindow {
  MatXd x;  // 36 x W, [-1,1]
  MatXd y;  // 8 x W, [0,1]
  BioVec bio_norm = BioVec::Zero();
  std::string user_id;
  std::string motion_label;
  int recording_id = 0;
  int start = 0;
  Provenance provenance = Provenance::unassigned;
};

// ---- unit maps -------------------------------------------------------------

inline double normalize_pressure(double kg) { return 2.0 * (kg / kMaxPressureKg) - 1.0; }
inline double denormalize_pressure(double v) { return (v + 1.0) * 0.5 * kMaxPressureKg; }
inline double normalize_activation(double uv) { return uv / kMaxEmgUv; }
inline double denormalize_activation(double v) { return v * kMaxEmgUv; }

/// Normalizes one 36-vector of kg readings; throws RangeError outside [0,20].
PressureVec normalize_pressure_frame(const PressureVec& kg);

SyncedRecording normalize(const SyncedRecording& rec);
SyncedRecording denormalize(const SyncedRecording& rec);

// ---- pipeline --------------------------------------------------------------

/// Block-mean sEMG over [t-25, t+25) ms around each pressure timestamp.
/// Frames with no sEMG sample in their block are dropped.
SyncedRecording synchronize(const std::vector<PressureFrame>& pressure,
                            const std::vector<EmgSample>& emg);

/// Full windows starting at 0, stride, 2*stride, ... Returns empty when the
/// recording is shorter than `length`.
std::vector<TrainingWindow> window(const SyncedRecording& rec, int length, int stride,
                                   const BioBounds& bounds = {});

// ---- files -----------------------------------------------------------------

std::vector<PressureFrame> load_pressure_csv(const std::filesystem::path& path);
void write_pressure_csv(const std::filesystem::path& path, const std::vector<PressureFrame>& frames);

std::vector<EmgSample> load_emg_csv(const std::filesystem::path& path);
void write_emg_csv(const std::filesystem::path& path, const std::vector<EmgSample>& samples);

BioProfile load_bio_json(const std::filesystem::path& path);
void write_bio_json(const std::filesystem::path& path, const BioProfile& bio);

struct ManifestEntry {
  std::string pressure_csv;
  std::string emg_csv;
  std::string bio_json;
  std::string user_id;
  std::string motion_label;
};

struct Manifest {
  std::filesystem::path base_dir;  // relative entry paths resolve against this
  std::vector<ManifestEntry> entries;
};

Manifest load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

/// Loads, synchronizes and tags every recording listed in the manifest
/// (physical units). Recording ids follow manifest order.
std::vector<SyncedRecording> load_dataset(const Manifest& manifest);

/// `t_ms,pred0..pred7` in [0,1] activation units.
void write_prediction_csv(const std::filesystem::path& path, const std::vector<std::int64_t>& t_ms,
                          const MatXd& predictions);
MatXd load_prediction_csv(const std::filesystem::path& path, std::vector<std::int64_t>* t_ms = nullptr);

/// `t_ms,gt0..gt7,pred0..pred7`.
void write_comparison_csv(const std::filesystem::path& path, const std::vector<std::int64_t>& t_ms,
                          const MatXd& truth, const MatXd& predictions);

}  // namespace insole
