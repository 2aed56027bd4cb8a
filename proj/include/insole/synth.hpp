#pragma once

#include "insole/augment.hpp"
#include "insole/data.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace insole {

// Frame: x points forward (anterior), y points toward the right foot, z up.
// All positions in metres.

/// Per-user movement style, so users are distinguishable.
struct UserStyle {
  std::array<double, kMuscles> gain_scale;   // multiplies effector gains
  std::array<double, kMuscles> phase_offset; // radians, added to motion phases

  static UserStyle neutral();
  static UserStyle sample(Rng& rng);
};

/// One mass-carrying effector per muscle group.
struct Effector {
  double mass = 0.0;               // kg
  Eigen::Vector3d rest = Eigen::Vector3d::Zero();
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();  // unit vector
  double gain = 0.0;               // metres per unit activation
};

struct BodyModel {
  double total_mass = 70.0;
  double com_height = 0.935;
  double gravity = 9.81;
  std::array<Effector, kMuscles> effectors;

  /// Anthropometric defaults scaled to the user's weight and height.
  static BodyModel from_bio(const BioProfile& bio, const UserStyle& style = UserStyle::neutral());
  void validate() const;
};

struct SensorLayout {
  std::array<Eigen::Vector2d, kChannelsPerFoot> left;   // foot-local (x, y)
  std::array<Eigen::Vector2d, kChannelsPerFoot> right;
  double foot_separation = 0.20;  // centre to centre
  double kernel_sigma = 0.05;
  double foot_length = 0.30;
  double foot_width = 0.11;

  /// 6 rows x 3 columns per foot, rows heel to toe.
  static SensorLayout standard();
  void validate() const;

  Eigen::Vector2d left_centre() const { return {0.0, -0.5 * foot_separation}; }
  Eigen::Vector2d right_centre() const { return {0.0, 0.5 * foot_separation}; }
};

SensorLayout load_layout_json(const std::filesystem::path& path);
void write_layout_json(const std::filesystem::path& path, const SensorLayout& layout);

struct MotionSpec {
  std::string name;
  std::array<double, kMuscles> amplitude{};  // [0,1]
  std::array<double, kMuscles> frequency{};  // Hz
  std::array<double, kMuscles> phase{};      // radians
  double duration_s = 60.0;
  double noise_sigma = 0.01;
  double asymmetry = 1.0;  // multiplies right-side activations

  void validate() const;
};

/// Fifteen exercise-style motions covering lower-body, upper-body and
/// full-body movement.
std::vector<MotionSpec> default_motion_library();
const MotionSpec& find_motion(const std::vector<MotionSpec>& library, const std::string& name);

/// 8 x T activation at `rate_hz`. `style` shifts phases.
MatXd gen_activation(const MotionSpec& spec, Rng& rng, double rate_hz = 20.0,
                     const UserStyle& style = UserStyle::neutral());

struct ComTrajectory {
  Eigen::MatrixX3d com;    // T x 3
  Eigen::MatrixX2d accel;  // T x 2, horizontal
};

ComTrajectory com_from_activation(const MatXd& activation, const BodyModel& body, double rate_hz = 20.0);

/// Horizontal centre of pressure (T x 2) under the quasi-static load F_z = M g.
Eigen::MatrixX2d cop_from_com(const ComTrajectory& traj, const BodyModel& body);

struct PressureSynthOptions {
  double noise_kg = 0.05;
  bool clamp = true;
  std::int64_t t0_ms = 0;
};

/// Splits body weight between the feet by lateral CoP and spreads each foot's
/// load over its sensors with a Gaussian kernel centred at the CoP.
std::vector<PressureFrame> pressure_from_cop(const Eigen::MatrixX2d& cop, const BodyModel& body,
                                             const SensorLayout& layout, Rng& rng,
                                             const PressureSynthOptions& options = {});

/// Fraction of CoP samples inside the rectangle spanned by both footprints.
double cop_support_fraction(const Eigen::MatrixX2d& cop, const SensorLayout& layout);

// ---- datasets --------------------------------------------------------------

struct SynthConfig {
  int n_users = 10;
  std::vector<std::string> motions;  // empty: whole library
  double duration_s = 60.0;
  double emg_rate_hz = 500.0;
  double pressure_noise_kg = 0.05;
  double activation_noise = 0.01;
  double asymmetry_prob = 0.3;  // chance a recording gets a random right-side factor
  std::uint64_t seed = 2024;
  SensorLayout layout = SensorLayout::standard();

  void validate() const;
};

struct SynthRecording {
  std::string user_id;
  std::string motion_label;
  BioProfile bio;
  double asymmetry = 1.0;
  MatXd activation;  // 8 x T at 20 Hz, [0,1]
  std::vector<PressureFrame> pressure;
  std::vector<EmgSample> emg;
};

struct SynthUser {
  std::string id;
  BioProfile bio;
  UserStyle style;
};

std::vector<SynthUser> sample_users(int n_users, std::uint64_t seed);

/// One recording of `motion` by `user`; the rng stream is derived from
/// (seed, user index, motion index).
SynthRecording gen_recording(const SynthUser& user, int user_index, const MotionSpec& motion, int motion_index,
                             const SynthConfig& cfg);

std::vector<SynthRecording> gen_dataset(const SynthConfig& cfg);

/// Routes a synthetic recording through synchronize() like a real one.
SyncedRecording to_synced(const SynthRecording& rec, int recording_id);

/// Writes CSV/JSON files, layout.json and manifest.json under `dir`.
void write_dataset(const std::filesystem::path& dir, const std::vector<SynthRecording>& recs,
                   const SensorLayout& layout);

}  // namespace insole
