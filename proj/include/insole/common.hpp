#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace insole {

inline constexpr int kChannelsPerFoot = 18;
inline constexpr int kChannels = 2 * kChannelsPerFoot;
inline constexpr int kMuscles = 8;
inline constexpr int kBioDims = 5;

inline constexpr double kMaxPressureKg = 20.0;
inline constexpr double kMaxEmgUv = 1000.0;
inline constexpr int kFramePeriodMs = 50;  // 20 Hz

// Canonical muscle order used by every file format and report.
inline constexpr std::array<const char*, kMuscles> kMuscleNames = {
    "L-bicep", "R-bicep", "L-back", "R-back", "L-quad", "R-quad", "L-ham", "R-ham"};

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatXd = Mat<double>;
using VecXd = Vec<double>;
using MatXf = Mat<float>;

using PressureVec = Eigen::Matrix<double, kChannels, 1>;
using ActivationVec = Eigen::Matrix<double, kMuscles, 1>;
using BioVec = Eigen::Matrix<double, kBioDims, 1>;

// Error taxonomy. The CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : Error {
  using Error::Error;
};
struct SequencingError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct AlignmentError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct CorruptionError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct TrainingError : NumericError {
  using NumericError::NumericError;
};

}  // namespace insole
