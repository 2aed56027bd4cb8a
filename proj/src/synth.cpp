#include "insole/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>

namespace insole {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<double, kMuscles> kMassFraction = {0.05, 0.05, 0.25, 0.25, 0.12, 0.12, 0.08, 0.08};
constexpr double kNoiseTimeConstant = 0.3;  // s
constexpr std::array<double, kMuscles> kGain = {0.35, 0.35, 0.15, 0.15, 0.20, 0.20, 0.20, 0.20};

// Left-side rest offsets (y, z as fraction of height) and motion directions;
// right-side effectors mirror y.
struct EffectorTemplate {
  double y;
  double z_frac;
  Eigen::Vector3d dir;
};
const std::array<EffectorTemplate, 4> kTemplates = {{
    {-0.20, 0.72, Eigen::Vector3d(0.85, -0.25, 0.45)},   // arm raise, forward and out
    {-0.08, 0.65, Eigen::Vector3d(-0.85, -0.45, 0.20)},  // trunk extension with side lean
    {-0.10, 0.38, Eigen::Vector3d(0.85, -0.35, -0.30)},  // knee forward
    {-0.10, 0.22, Eigen::Vector3d(-0.80, -0.50, 0.20)},  // hip extension
}};

bool is_right(int muscle) { return muscle % 2 == 1; }

std::string slug(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

Rng derived_rng(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), a, b, tag};
  return Rng(seq);
}

MotionSpec motion(std::string name, std::array<double, kMuscles> amp, std::array<double, kMuscles> freq,
                  std::array<double, kMuscles> phase) {
  MotionSpec m;
  m.name = std::move(name);
  m.amplitude = amp;
  m.frequency = freq;
  m.phase = phase;
  return m;
}

std::array<double, kMuscles> all(double v) {
  std::array<double, kMuscles> a;
  a.fill(v);
  return a;
}

}  // namespace

UserStyle UserStyle::neutral() {
  UserStyle s;
  s.gain_scale.fill(1.0);
  s.phase_offset.fill(0.0);
  return s;
}

UserStyle UserStyle::sample(Rng& rng) {
  std::uniform_real_distribution<double> gain(0.8, 1.2);
  std::uniform_real_distribution<double> phase(-0.3, 0.3);
  UserStyle s;
  for (int i = 0; i < kMuscles; ++i) {
    s.gain_scale[static_cast<std::size_t>(i)] = gain(rng);
    s.phase_offset[static_cast<std::size_t>(i)] = phase(rng);
  }
  return s;
}

BodyModel BodyModel::from_bio(const BioProfile& bio, const UserStyle& style) {
  BodyModel body;
  const double height_m = bio.height_cm / 100.0;
  body.total_mass = bio.weight_kg;
  body.com_height = 0.55 * height_m;
  for (int i = 0; i < kMuscles; ++i) {
    const auto& tpl = kTemplates[static_cast<std::size_t>(i / 2)];
    const double side = is_right(i) ? -1.0 : 1.0;
    auto& e = body.effectors[static_cast<std::size_t>(i)];
    e.mass = kMassFraction[static_cast<std::size_t>(i)] * body.total_mass;
    e.rest = Eigen::Vector3d(0.0, side * tpl.y, tpl.z_frac * height_m);
    e.direction = Eigen::Vector3d(tpl.dir.x(), side * tpl.dir.y(), tpl.dir.z()).normalized();
    e.gain = kGain[static_cast<std::size_t>(i)] * (height_m / 1.7) * style.gain_scale[static_cast<std::size_t>(i)];
  }
  body.validate();
  return body;
}

void BodyModel::validate() const {
  double sum = 0.0;
  for (const auto& e : effectors) {
    if (e.gain < 0.0) throw ConfigError("body: effector gains must be >= 0");
    sum += e.mass;
  }
  if (std::abs(sum - total_mass) > 1e-9 * std::max(1.0, total_mass)) {
    throw ConfigError("body: effector masses must sum to the total mass");
  }
  if (!(com_height > 0.0) || !(total_mass > 0.0) || !(gravity > 0.0)) {
    throw ConfigError("body: mass, CoM height and gravity must be positive");
  }
}

SensorLayout SensorLayout::standard() {
  SensorLayout l;
  for (int row = 0; row < 6; ++row) {
    for (int col = 0; col < 3; ++col) {
      const double x = -0.125 + 0.05 * row;
      const double y = -0.035 + 0.035 * col;
      l.left[static_cast<std::size_t>(row * 3 + col)] = {x, y};
      l.right[static_cast<std::size_t>(row * 3 + col)] = {x, -y};
    }
  }
  return l;
}

void SensorLayout::validate() const {
  if (!(kernel_sigma > 0.0)) throw ConfigError("layout: kernel sigma must be positive");
  if (!(foot_separation > 0.0)) throw ConfigError("layout: foot separation must be positive");
  auto inside = [&](const Eigen::Vector2d& p) {
    return std::abs(p.x()) <= 0.5 * foot_length + 1e-12 && std::abs(p.y()) <= 0.5 * foot_width + 1e-12;
  };
  for (int i = 0; i < kChannelsPerFoot; ++i) {
    if (!inside(left[static_cast<std::size_t>(i)]) || !inside(right[static_cast<std::size_t>(i)])) {
      throw ConfigError("layout: sensor outside the footprint");
    }
  }
}

SensorLayout load_layout_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    const json j = json::parse(in);
    SensorLayout l;
    l.foot_separation = j.at("foot_separation").get<double>();
    l.kernel_sigma = j.at("kernel_sigma").get<double>();
    l.foot_length = j.value("foot_length", l.foot_length);
    l.foot_width = j.value("foot_width", l.foot_width);
    for (const char* side : {"left", "right"}) {
      const auto& pts = j.at(side);
      if (pts.size() != kChannelsPerFoot) throw FormatError("layout: need 18 sensors per foot");
      auto& dst = std::string(side) == "left" ? l.left : l.right;
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = {pts[i].at(0).get<double>(), pts[i].at(1).get<double>()};
    }
    l.validate();
    return l;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_layout_json(const fs::path& path, const SensorLayout& layout) {
  json j = {{"foot_separation", layout.foot_separation},
            {"kernel_sigma", layout.kernel_sigma},
            {"foot_length", layout.foot_length},
            {"foot_width", layout.foot_width}};
  for (const char* side : {"left", "right"}) {
    json pts = json::array();
    for (const auto& p : std::string(side) == "left" ? layout.left : layout.right) pts.push_back({p.x(), p.y()});
    j[side] = pts;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void MotionSpec::validate() const {
  for (int i = 0; i < kMuscles; ++i) {
    const auto a = amplitude[static_cast<std::size_t>(i)];
    const auto f = frequency[static_cast<std::size_t>(i)];
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("motion " + name + ": amplitude must lie in [0,1]");
    if (!(f >= 0.0 && f <= 5.0)) throw ConfigError("motion " + name + ": frequency must lie in [0,5] Hz");
  }
  if (!(duration_s >= 1.0)) throw ConfigError("motion " + name + ": duration must be >= 1 s");
  if (!(asymmetry >= 0.0 && asymmetry <= 1.0)) throw ConfigError("motion " + name + ": asymmetry must lie in [0,1]");
  if (!(noise_sigma >= 0.0)) throw ConfigError("motion " + name + ": noise must be >= 0");
}

std::vector<MotionSpec> default_motion_library() {
  constexpr double pi = std::numbers::pi;
  // Muscle order: L-bicep, R-bicep, L-back, R-back, L-quad, R-quad, L-ham, R-ham.
  const std::array<double, kMuscles> alternate = {0, pi, 0, pi, 0, pi, 0, pi};
  // Hip and back extensors lag the quads by a quarter cycle in the squat.
  const std::array<double, kMuscles> squat = {0, 0, pi / 2, pi / 2, 0, 0, pi / 2, pi / 2};
  return {
      motion("Knee Kick", {0.1, 0.1, 0.2, 0.2, 0.8, 0.8, 0.5, 0.5}, all(0.5), alternate),
      motion("Leg Cross", {0.1, 0.1, 0.3, 0.3, 0.6, 0.6, 0.6, 0.6}, all(0.4), {0, pi, 0.5, 0.5 + pi, 0, pi, pi / 2, 1.5 * pi}),
      motion("Leg Kick (B)", {0.1, 0.1, 0.4, 0.4, 0.3, 0.3, 0.9, 0.9}, all(0.5), alternate),
      motion("Leg Swing (F/B)", {0.1, 0.1, 0.3, 0.3, 0.7, 0.7, 0.7, 0.7}, all(0.6), {0, pi, 0, pi, 0, pi, pi, 0}),
      motion("Leg Swing (S)", {0.1, 0.1, 0.4, 0.4, 0.5, 0.5, 0.4, 0.4}, all(0.6), {0, pi, pi / 2, 1.5 * pi, 0, pi, pi / 2, 1.5 * pi}),
      motion("Leg Push (F)", {0.1, 0.1, 0.2, 0.2, 0.9, 0.9, 0.4, 0.4}, all(0.4), {0, 0, 0, 0, 0, pi, pi / 3, pi + pi / 3}),
      motion("Leg Push (S)", {0.1, 0.1, 0.3, 0.3, 0.7, 0.7, 0.7, 0.7}, all(0.4), {0, 0, 0, pi, 0, pi, pi, 0}),
      motion("Arm Swing", {0.9, 0.9, 0.3, 0.3, 0.1, 0.1, 0.1, 0.1}, all(0.8), alternate),
      motion("Open Arm & Chest Expansion", {0.6, 0.6, 0.8, 0.8, 0.1, 0.1, 0.1, 0.1}, all(0.4), {0, 0, pi / 2, pi / 2, 0, 0, 0, 0}),
      motion("Swing a Tennis Racket", {0.3, 0.9, 0.7, 0.5, 0.3, 0.4, 0.2, 0.3}, all(0.5), {pi, 0, 0.8, 0, 0, 0.5, pi, 0.5}),
      motion("Upper-body Twist", {0.3, 0.3, 0.9, 0.9, 0.2, 0.2, 0.1, 0.1}, all(0.4), {pi, 0, 0, pi, 0, pi, 0, pi}),
      motion("Squat", {0.2, 0.2, 0.4, 0.4, 0.9, 0.9, 0.7, 0.7}, all(0.3), squat),
      motion("Stretch (S)", {0.3, 0.3, 0.7, 0.7, 0.4, 0.4, 0.3, 0.3}, all(0.25), alternate),
      motion("Full-body Twist", {0.4, 0.4, 0.8, 0.8, 0.5, 0.5, 0.3, 0.3}, all(0.35), {pi, 0, 0, pi, pi / 2, 1.5 * pi, 0, pi}),
      motion("Jack Jump", all(0.5), all(0.6), {0, 0, pi / 2, pi / 2, 0, 0, pi / 4, pi / 4}),
  };
}

const MotionSpec& find_motion(const std::vector<MotionSpec>& library, const std::string& name) {
  for (const auto& m : library) {
    if (m.name == name) return m;
  }
  throw ConfigError("unknown motion '" + name + "'");
}

MatXd gen_activation(const MotionSpec& spec, Rng& rng, double rate_hz, const UserStyle& style) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(std::llround(spec.duration_s * rate_hz));
  std::normal_distribution<double> noise(0.0, 1.0);

  // Band-limited noise: white noise through two first-order low-pass stages,
  // rescaled to unit stationary variance. White noise would dominate the CoM
  // acceleration after double differentiation.
  const double rho = std::exp(-1.0 / (kNoiseTimeConstant * rate_hz));
  const double var = std::pow(1.0 - rho, 4) * (1.0 + rho * rho) / std::pow(1.0 - rho * rho, 3);
  const double gain = 1.0 / std::sqrt(var);
  std::array<double, kMuscles> stage1{}, stage2{};
  auto step_noise = [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    stage1[k] = rho * stage1[k] + (1.0 - rho) * noise(rng);
    stage2[k] = rho * stage2[k] + (1.0 - rho) * stage1[k];
    return gain * stage2[k];
  };
  const bool noisy = spec.noise_sigma > 0.0;
  if (noisy) {
    for (int burn = 0; burn < static_cast<int>(10.0 * kNoiseTimeConstant * rate_hz); ++burn) {
      for (int i = 0; i < kMuscles; ++i) step_noise(i);
    }
  }

  MatXd a(kMuscles, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / rate_hz;
    for (int i = 0; i < kMuscles; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double base =
          spec.amplitude[k] *
          (0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * spec.frequency[k] * t + spec.phase[k] + style.phase_offset[k]));
      const double eps = noisy ? spec.noise_sigma * step_noise(i) : 0.0;
      double v = std::clamp(base + eps, 0.0, 1.0);
      if (is_right(i)) v *= spec.asymmetry;
      a(i, j) = v;
    }
  }
  return a;
}

ComTrajectory com_from_activation(const MatXd& activation, const BodyModel& body, double rate_hz) {
  body.validate();
  if (activation.rows() != kMuscles) throw ConfigError("com_from_activation: expected 8 activation rows");
  const auto n = activation.cols();
  ComTrajectory out;
  out.com.setZero(n, 3);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
    for (int i = 0; i < kMuscles; ++i) {
      const auto& e = body.effectors[static_cast<std::size_t>(i)];
      weighted += e.mass * (e.rest + e.gain * activation(i, j) * e.direction);
    }
    out.com.row(j) = (weighted / body.total_mass).transpose();
  }
  out.accel.setZero(n, 2);
  if (n < 3) return out;
  const double inv_dt2 = rate_hz * rate_hz;
  for (Eigen::Index j = 1; j + 1 < n; ++j) {
    out.accel.row(j) = (out.com.row(j + 1).head<2>() - 2.0 * out.com.row(j).head<2>() + out.com.row(j - 1).head<2>()) * inv_dt2;
  }
  out.accel.row(0) = out.accel.row(1);
  out.accel.row(n - 1) = out.accel.row(n - 2);
  return out;
}

Eigen::MatrixX2d cop_from_com(const ComTrajectory& traj, const BodyModel& body) {
  const double fz = body.total_mass * body.gravity;
  Eigen::MatrixX2d cop(traj.com.rows(), 2);
  for (Eigen::Index j = 0; j < traj.com.rows(); ++j) {
    for (int axis = 0; axis < 2; ++axis) {
      cop(j, axis) = traj.com(j, axis) + (-body.total_mass * body.com_height * traj.accel(j, axis)) / fz;
    }
  }
  return cop;
}

std::vector<PressureFrame> pressure_from_cop(const Eigen::MatrixX2d& cop, const BodyModel& body,
                                             const SensorLayout& layout, Rng& rng,
                                             const PressureSynthOptions& options) {
  layout.validate();
  std::normal_distribution<double> noise(0.0, 1.0);
  const double inv_two_sigma2 = 1.0 / (2.0 * layout.kernel_sigma * layout.kernel_sigma);
  auto spread = [&](const std::array<Eigen::Vector2d, kChannelsPerFoot>& sensors, const Eigen::Vector2d& centre,
                    const Eigen::Vector2d& p, double load_kg) {
    FootVec w;
    const Eigen::Vector2d local = p - centre;
    for (int s = 0; s < kChannelsPerFoot; ++s) {
      w(s) = std::exp(-(sensors[static_cast<std::size_t>(s)] - local).squaredNorm() * inv_two_sigma2);
    }
    return FootVec(load_kg * w / w.sum());
  };
  auto finish = [&](FootVec v) {
    for (int s = 0; s < kChannelsPerFoot; ++s) {
      if (options.noise_kg > 0.0) v(s) += options.noise_kg * noise(rng);
      if (options.clamp) v(s) = std::clamp(v(s), 0.0, kMaxPressureKg);
    }
    return v;
  };

  std::vector<PressureFrame> frames;
  frames.reserve(static_cast<std::size_t>(cop.rows()));
  // Vertical force is M g, so the per-foot load in kg is just the mass share.
  for (Eigen::Index j = 0; j < cop.rows(); ++j) {
    const Eigen::Vector2d p = cop.row(j).transpose();
    const double w_left = std::clamp(0.5 - p.y() / layout.foot_separation, 0.0, 1.0);
    PressureFrame f;
    f.t_ms = options.t0_ms + j * kFramePeriodMs;
    f.left = finish(spread(layout.left, layout.left_centre(), p, w_left * body.total_mass));
    f.right = finish(spread(layout.right, layout.right_centre(), p, (1.0 - w_left) * body.total_mass));
    frames.push_back(f);
  }
  return frames;
}

double cop_support_fraction(const Eigen::MatrixX2d& cop, const SensorLayout& layout) {
  if (cop.rows() == 0) return 1.0;
  const double half_len = 0.5 * layout.foot_length;
  const double half_width = 0.5 * layout.foot_separation + 0.5 * layout.foot_width;
  Eigen::Index inside = 0;
  for (Eigen::Index j = 0; j < cop.rows(); ++j) {
    if (std::abs(cop(j, 0)) <= half_len && std::abs(cop(j, 1)) <= half_width) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(cop.rows());
}

// ---- datasets --------------------------------------------------------------

void SynthConfig::validate() const {
  if (n_users < 2) throw ConfigError("synth: need at least two users");
  if (!(duration_s >= 1.0)) throw ConfigError("synth: duration must be >= 1 s");
  if (!(emg_rate_hz >= 20.0)) throw ConfigError("synth: sEMG rate must be >= 20 Hz");
  if (!(asymmetry_prob >= 0.0 && asymmetry_prob <= 1.0)) throw ConfigError("synth: asymmetry_prob must lie in [0,1]");
  layout.validate();
}

std::vector<SynthUser> sample_users(int n_users, std::uint64_t seed) {
  std::vector<SynthUser> users;
  for (int u = 0; u < n_users; ++u) {
    Rng rng = derived_rng(seed, static_cast<std::uint32_t>(u), 0, 0xB10);
    std::uniform_real_distribution<double> weight(39.0, 83.0), height(150.0, 186.0), age(22.0, 37.0);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    std::bernoulli_distribution female(0.3);
    SynthUser user;
    char id[16];
    std::snprintf(id, sizeof id, "user%02d", u);
    user.id = id;
    user.bio.weight_kg = std::round(weight(rng) * 10.0) / 10.0;
    user.bio.height_cm = std::round(height(rng));
    user.bio.age_years = std::round(age(rng));
    user.bio.shoe_size_eu = std::clamp(std::round(35.0 + (user.bio.height_cm - 150.0) / 3.0 + jitter(rng)), 35.0, 47.0);
    user.bio.gender_code = female(rng) ? 1 : 0;
    user.style = UserStyle::sample(rng);
    users.push_back(user);
  }
  return users;
}

SynthRecording gen_recording(const SynthUser& user, int user_index, const MotionSpec& motion, int motion_index,
                             const SynthConfig& cfg) {
  Rng rng = derived_rng(cfg.seed, static_cast<std::uint32_t>(user_index), static_cast<std::uint32_t>(motion_index), 0xAC7);
  MotionSpec spec = motion;
  spec.duration_s = cfg.duration_s;
  spec.noise_sigma = cfg.activation_noise;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < cfg.asymmetry_prob) spec.asymmetry = unit(rng);

  SynthRecording rec;
  rec.user_id = user.id;
  rec.motion_label = motion.name;
  rec.bio = user.bio;
  rec.asymmetry = spec.asymmetry;
  rec.activation = gen_activation(spec, rng, 20.0, user.style);

  const BodyModel body = BodyModel::from_bio(user.bio, user.style);
  const auto traj = com_from_activation(rec.activation, body);
  PressureSynthOptions opts;
  opts.noise_kg = cfg.pressure_noise_kg;
  rec.pressure = pressure_from_cop(cop_from_com(traj, body), body, cfg.layout, rng, opts);

  // sEMG envelope at the native rate, linearly interpolated between frames.
  const auto n = rec.activation.cols();
  const double step_ms = 1000.0 / cfg.emg_rate_hz;
  const auto n_emg = static_cast<std::int64_t>(std::floor(static_cast<double>(n * kFramePeriodMs) / step_ms));
  rec.emg.reserve(static_cast<std::size_t>(n_emg));
  for (std::int64_t k = 0; k < n_emg; ++k) {
    const double t = static_cast<double>(k) * step_ms;
    const double pos = t / kFramePeriodMs;
    const auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), n - 1);
    const auto j1 = std::min<Eigen::Index>(j + 1, n - 1);
    const double frac = std::clamp(pos - static_cast<double>(j), 0.0, 1.0);
    EmgSample s;
    s.t_ms = static_cast<std::int64_t>(std::llround(t));
    s.channels = ((1.0 - frac) * rec.activation.col(j) + frac * rec.activation.col(j1)) * kMaxEmgUv;
    s.channels = s.channels.cwiseMax(0.0).cwiseMin(kMaxEmgUv);
    rec.emg.push_back(s);
  }
  return rec;
}

std::vector<SynthRecording> gen_dataset(const SynthConfig& cfg) {
  cfg.validate();
  const auto library = default_motion_library();
  std::vector<std::pair<int, const MotionSpec*>> motions;
  if (cfg.motions.empty()) {
    for (std::size_t i = 0; i < library.size(); ++i) motions.emplace_back(static_cast<int>(i), &library[i]);
  } else {
    for (const auto& name : cfg.motions) {
      const auto& m = find_motion(library, name);
      motions.emplace_back(static_cast<int>(&m - library.data()), &m);
    }
  }
  const auto users = sample_users(cfg.n_users, cfg.seed);
  std::vector<SynthRecording> out;
  for (int u = 0; u < cfg.n_users; ++u) {
    for (const auto& [index, m] : motions) out.push_back(gen_recording(users[static_cast<std::size_t>(u)], u, *m, index, cfg));
  }
  return out;
}

SyncedRecording to_synced(const SynthRecording& rec, int recording_id) {
  SyncedRecording s = synchronize(rec.pressure, rec.emg);
  s.user_id = rec.user_id;
  s.motion_label = rec.motion_label;
  s.bio = rec.bio;
  s.recording_id = recording_id;
  return s;
}

void write_dataset(const fs::path& dir, const std::vector<SynthRecording>& recs, const SensorLayout& layout) {
  fs::create_directories(dir);
  std::vector<ManifestEntry> entries;
  for (const auto& r : recs) {
    const std::string base = r.user_id + "/" + slug(r.motion_label);
    ManifestEntry e;
    e.pressure_csv = base + "_pressure.csv";
    e.emg_csv = base + "_emg.csv";
    e.bio_json = r.user_id + "/bio.json";
    e.user_id = r.user_id;
    e.motion_label = r.motion_label;
    write_pressure_csv(dir / e.pressure_csv, r.pressure);
    write_emg_csv(dir / e.emg_csv, r.emg);
    write_bio_json(dir / e.bio_json, r.bio);
    entries.push_back(std::move(e));
  }
  write_layout_json(dir / "layout.json", layout);
  write_manifest(dir / "manifest.json", entries);
}

}  // namespace insole
