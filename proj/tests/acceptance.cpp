// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero when any of them fails.

#include "insole/augment.hpp"
#include "insole/eval.hpp"
#include "insole/loss.hpp"
#include "insole/stream.hpp"
#include "insole/synth.hpp"
#include "insole/train.hpp"
#include "oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>

using namespace insole;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(const char* name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- reduced-scale LOUO experiment -----------------------------------------

// Six motions whose CoP trajectories stay distinguishable across users.
const std::vector<std::string> kMotions = {"Leg Swing (S)",    "Leg Push (F)", "Arm Swing", "Open Arm & Chest Expansion",
                                           "Upper-body Twist", "Jack Jump"};
const std::string kHeldOut = "user03";
constexpr int kWindow = 20;

SynthConfig louo_synth() {
  SynthConfig cfg;
  cfg.n_users = 10;
  cfg.motions = kMotions;
  cfg.duration_s = 60.0;
  cfg.asymmetry_prob = 1.0;  // every recording draws a right-side factor in [0,1)
  return cfg;
}

ModelConfig reduced_model(std::uint64_t seed) {
  ModelConfig m;
  m.hidden = 128;
  m.ffn_dim = 256;
  m.n_layers = 2;
  m.seed = seed;
  return m;
}

TrainConfig reduced_train(std::uint64_t seed, bool no_mask) {
  TrainConfig t;
  t.lr = 1e-3;
  t.batch_size = 64;
  t.epochs = 10;
  t.bio_noise = 0.2;
  t.seed = seed;
  t.ablation.no_mask = no_mask;
  return t;
}

constexpr int kTrainStride = 10;

struct Experiment {
  Partition<SyncedRecording> part;
  std::vector<TrainingWindow> train_windows;
  double gen_seconds = 0.0;
};

Experiment prepare() {
  const auto t0 = Clock::now();
  Experiment e;
  const auto recs = gen_dataset(louo_synth());
  std::vector<SyncedRecording> synced;
  for (std::size_t i = 0; i < recs.size(); ++i) synced.push_back(normalize(to_synced(recs[i], static_cast<int>(i))));
  SplitSpec spec;
  spec.mode = SplitMode::leave_one_user_out;
  spec.held_out = kHeldOut;
  e.part = split(synced, spec);
  for (const auto& r : e.part.train) {
    for (auto& w : window(r, kWindow, kTrainStride)) {
      w.provenance = Provenance::train;
      e.train_windows.push_back(std::move(w));
    }
  }
  e.gen_seconds = seconds_since(t0);
  return e;
}

struct RunResult {
  std::optional<InferenceModel> model;
  double rmse = 0.0;
  double seconds = 0.0;
};

RunResult train_and_score(const Experiment& e, std::uint64_t seed, bool no_mask) {
  const auto t0 = Clock::now();
  const auto fitted = fit(e.train_windows, reduced_train(seed, no_mask), reduced_model(seed), AugmentConfig{});
  RunResult r;
  r.model.emplace(fitted.params, fitted.model);
  r.rmse = evaluate(network_predictor(*r.model), e.part.test, kWindow).overall.rmse_mean;
  r.seconds = seconds_since(t0);
  return r;
}

// ---- individual criteria ---------------------------------------------------

Outcome gradient_check() {
  const auto cfg = testing::toy_config();
  const auto params = testing::perturbed_params(cfg, 11);
  const auto batch = testing::toy_batch(cfg, 3, 12);
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string worst_name;
  for (const auto& c : testing::finite_difference_check(params, cfg, batch, 0.1)) {
    if (c.rel_error > worst) {
      worst = c.rel_error;
      worst_name = c.name;
    }
  }
  const double t = seconds_since(t0);
  return {worst < 1e-4 && t < 60.0, fmt("max rel error %.2e (%s), %.1fs", worst, worst_name.c_str(), t)};
}

Outcome loss_identities() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Mat<double> p = Mat<double>::NullaryExpr(kMuscles, kWindow, [&] { return u(rng); });
    const Mat<double> t = Mat<double>::NullaryExpr(kMuscles, kWindow, [&] { return u(rng); });
    worst = std::max(worst, std::abs(loss_total(p, t, 0.1) - (loss_mse(p, t) + 0.1 * loss_smooth(p, t))));
  }

  Mat<double> y(2, 1), yh(2, 1);
  y << 1, 0;
  yh << 0, 1;
  const double mse = loss_mse(yh, y);
  Mat<double> a(1, 3), b(1, 3);
  a << 0, 0, 0;
  b << 0, 1, 0;
  const double smooth = loss_smooth(b, a);
  // Residuals with mean square 0.04 and squared step 0.02.
  const double sum = std::sqrt(0.14), diff = std::sqrt(0.02);
  Mat<double> p(1, 2), t = Mat<double>::Zero(1, 2);
  p << (sum - diff) / 2.0, (sum + diff) / 2.0;
  const double total = loss_total(p, t, 0.1);

  const bool ok = worst <= 1e-12 && mse == 1.0 && smooth == 1.0 && std::abs(total - 0.042) <= 1e-12;
  return {ok, fmt("identity gap %.1e, mse %.17g, smooth %.17g, total %.15g", worst, mse, smooth, total)};
}

Outcome single_window_overfit() {
  auto cfg = testing::toy_config();
  cfg.window = kWindow;
  auto synth = louo_synth();
  synth.n_users = 2;
  synth.motions = {"Squat"};
  synth.duration_s = 5.0;
  const auto rec = normalize(to_synced(gen_dataset(synth).front(), 0));
  auto w = window(rec, kWindow, kWindow).front();
  w.provenance = Provenance::train;

  TrainConfig tc;
  tc.lr = 1e-3;
  Trainer<double> trainer(cfg, tc);
  const std::vector<const TrainingWindow*> batch = {&w};
  const auto t0 = Clock::now();
  double loss = trainer.loss({w});
  int steps = 0;
  while (steps < 2000 && loss >= 1e-4) {
    trainer.step(batch);
    ++steps;
    loss = trainer.loss({w});
  }
  const double t = seconds_since(t0);
  return {loss < 1e-4 && t < 120.0, fmt("loss %.3e after %d steps, %.1fs", loss, steps, t)};
}

Outcome model_scale() {
  const ModelConfig cfg;
  const double params = static_cast<double>(cfg.parameter_count());
  const double flops = cfg.flops_per_window();
  const bool ok = std::abs(params - 7.9e6) <= 0.15 * 7.9e6 && flops >= 150e6 && flops <= 600e6;
  return {ok, fmt("%.3fM parameters, %.0fM FLOPs per window", params / 1e6, flops / 1e6)};
}

Outcome augmentation_statistics() {
  AugmentConfig cfg;
  const int trials = 10000;
  // Channel 0 swings 10 kg, channel 1 is flat, so they take the high and low paths.
  MatXd x = MatXd::Constant(kChannels, kWindow, normalize_pressure(5.0));
  for (int j = 0; j < kWindow; ++j) x(0, j) = normalize_pressure(j % 2 ? 15.0 : 5.0);
  for (int j = 0; j < kWindow; ++j) x(2, j) = normalize_pressure(static_cast<double>(j));

  Rng rng(99);
  int high = 0, low = 0, shifted = 0;
  bool in_range = true;
  for (int i = 0; i < trials; ++i) {
    const MatXd s = scale_augment(x, cfg, rng);
    high += s.row(0) != x.row(0);
    low += s.row(1) != x.row(1);
    const MatXd h = shift_augment(x, cfg, rng);
    shifted += h.row(2) != x.row(2);
    in_range = in_range && s.minCoeff() >= -1.0 && s.maxCoeff() <= 1.0 && h.minCoeff() >= -1.0 && h.maxCoeff() <= 1.0;
  }
  const double fh = static_cast<double>(high) / trials, fl = static_cast<double>(low) / trials,
               fs = static_cast<double>(shifted) / trials;

  // Shifts are at least one step and the ramp is strictly increasing, so every shift is visible.
  const double expect_shift = cfg.shift_prob;

  std::vector<TrainingWindow> ws(100);
  for (auto& w : ws) {
    w.x = x;
    w.y = MatXd::Constant(kMuscles, kWindow, 0.5);
  }
  const auto aug = augment_dataset(ws, cfg);
  for (const auto& w : aug) in_range = in_range && w.x.minCoeff() >= -1.0 && w.x.maxCoeff() <= 1.0;

  const bool ok = std::abs(fh - cfg.p_high) <= 0.02 && std::abs(fl - cfg.p_low) <= 0.02 &&
                  std::abs(fs - expect_shift) <= 0.02 && in_range && aug.size() == 3 * ws.size();
  return {ok, fmt("p_high %.4f, p_low %.4f, shift %.4f, size %zu -> %zu, in range %d", fh, fl, fs, ws.size(), aug.size(), in_range)};
}

Outcome physics_oracles() {
  const auto body = BodyModel::from_bio({70.0, 175.0, 30.0, 42.0, 0});
  const auto lib = default_motion_library();
  Rng rng(3);

  const auto traj = com_from_activation(gen_activation(lib[0], rng), body);
  ComTrajectory still = traj;
  still.accel.setZero();
  const double static_err = (cop_from_com(still, body) - traj.com.leftCols(2)).cwiseAbs().maxCoeff();

  BodyModel heavy = body;
  heavy.total_mass *= 2.0;
  for (auto& e : heavy.effectors) e.mass *= 2.0;
  const double mass_err = (cop_from_com(traj, heavy) - cop_from_com(traj, body)).cwiseAbs().maxCoeff();

  const double amp = 0.02, omega = 2.0 * std::numbers::pi * 0.5, rate = 20.0;
  const int n = 200;
  ComTrajectory sine;
  sine.com.setZero(n, 3);
  sine.accel.setZero(n, 2);
  for (int j = 0; j < n; ++j) sine.com(j, 0) = amp * std::sin(omega * j / rate);
  for (int j = 1; j + 1 < n; ++j) {
    sine.accel(j, 0) = (sine.com(j + 1, 0) - 2 * sine.com(j, 0) + sine.com(j - 1, 0)) * rate * rate;
  }
  const auto cop = cop_from_com(sine, body);
  const double gain = 1.0 + body.com_height * omega * omega / body.gravity;
  double sine_err = 0.0;
  for (int j = 1; j + 1 < n; ++j) {
    sine_err = std::max(sine_err, std::abs(cop(j, 0) - amp * gain * std::sin(omega * j / rate)) / (amp * gain));
  }

  PressureSynthOptions exact;
  exact.noise_kg = 0.0;
  exact.clamp = false;
  double load_err = 0.0;
  for (const auto& m : lib) {
    auto spec = m;
    spec.duration_s = 10.0;
    const auto tr = com_from_activation(gen_activation(spec, rng), body);
    for (const auto& f : pressure_from_cop(cop_from_com(tr, body), body, SensorLayout::standard(), rng, exact)) {
      load_err = std::max(load_err, std::abs(f.stacked().sum() - body.total_mass));
    }
  }
  const bool ok = static_err == 0.0 && mass_err < 1e-12 && sine_err <= 0.01 && load_err < 1e-9;
  return {ok, fmt("static %.1e, mass %.1e, sinusoid %.2f%%, load %.1e kg", static_err, mass_err, 100.0 * sine_err,
                  load_err)};
}

Outcome stream_matches_batch(const InferenceModel& model) {
  const auto users = sample_users(10, 77);
  const auto lib = default_motion_library();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pick_user(0, 9), pick_motion(0, static_cast<int>(lib.size()) - 1);
  std::uniform_real_distribution<double> dur(2.0, 6.0);
  const int w = model.config().window;
  double worst = 0.0;
  bool first_ok = true;
  for (int r = 0; r < 100; ++r) {
    SynthConfig cfg;
    cfg.duration_s = dur(rng);
    cfg.seed = 1000 + static_cast<std::uint64_t>(r);
    const int u = pick_user(rng), m = pick_motion(rng);
    const auto rec = gen_recording(users[static_cast<std::size_t>(u)], u, lib[static_cast<std::size_t>(m)], m, cfg);

    SyncedRecording raw;
    const auto n = static_cast<Eigen::Index>(rec.pressure.size());
    raw.pressure.resize(kChannels, n);
    raw.activation = MatXd::Zero(kMuscles, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      raw.pressure.col(j) = rec.pressure[static_cast<std::size_t>(j)].stacked();
      raw.t_ms.push_back(rec.pressure[static_cast<std::size_t>(j)].t_ms);
    }
    raw.bio = rec.bio;
    const MatXd batch = model.predict_recording(normalize(raw));

    StreamState stream(model, normalize_bio(rec.bio));
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto y = stream.push(rec.pressure[static_cast<std::size_t>(j)]);
      if (y.has_value() != (j + 1 >= w)) first_ok = false;
      if (y) worst = std::max(worst, (*y - batch.col(j)).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-6 && first_ok, fmt("max |stream - batch| %.2e over 100 recordings, first emission at frame W: %d",
                                          worst, first_ok)};
}

Outcome imbalance_sweep(const InferenceModel& model) {
  const auto users = sample_users(louo_synth().n_users, louo_synth().seed);
  int user_index = 0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (users[i].id == kHeldOut) user_index = static_cast<int>(i);
  }
  const auto& user = users[static_cast<std::size_t>(user_index)];
  const auto lib = default_motion_library();

  std::vector<double> truth, pred;
  for (int step = 0; step <= 10; ++step) {
    SynthConfig cfg = louo_synth();
    cfg.asymmetry_prob = 0.0;
    cfg.duration_s = 20.0;
    for (const auto& name : kMotions) {
      auto motion = find_motion(lib, name);
      motion.asymmetry = 0.1 * step;
      const int index = static_cast<int>(&find_motion(lib, name) - lib.data());
      const auto rec = normalize(to_synced(gen_recording(user, user_index, motion, index, cfg), 0));
      truth.push_back(imbalance_score(rec.activation));
      pred.push_back(imbalance_score(model.predict_recording(rec)));
    }
  }
  const Eigen::Map<const Eigen::VectorXd> t(truth.data(), static_cast<Eigen::Index>(truth.size()));
  const Eigen::Map<const Eigen::VectorXd> p(pred.data(), static_cast<Eigen::Index>(pred.size()));
  const auto r = pearson(t, p);
  return {r && *r >= 0.9, fmt("correlation %.3f over %zu recordings", r.value_or(0.0), truth.size())};
}

}  // namespace

int main() {
  run("gradient correctness", gradient_check);
  run("loss identities", loss_identities);
  run("single-window overfit", single_window_overfit);
  run("model scale", model_scale);
  run("augmentation statistics", augmentation_statistics);
  run("physics oracles", physics_oracles);

  std::optional<Experiment> exp;
  std::vector<RunResult> with_mask;
  with_mask.reserve(3);
  double baseline = 0.0;
  run("synthetic LOUO", [&]() -> Outcome {
    exp = prepare();
    baseline = evaluate(constant_predictor(mean_activation(exp->part.train)), exp->part.test, kWindow).overall.rmse_mean;
    with_mask.push_back(train_and_score(*exp, 1, false));
    const auto& r = with_mask.back();
    const double total = exp->gen_seconds + r.seconds;
    const double ratio = r.rmse / baseline;
    return {ratio <= 0.6 && total <= 600.0,
            fmt("held-out %s rmse %.4f vs mean baseline %.4f (ratio %.3f), %zu train windows, %.0fs", kHeldOut.c_str(),
                r.rmse, baseline, ratio, exp->train_windows.size(), total)};
  });

  const InferenceModel* trained = with_mask.empty() ? nullptr : &*with_mask.front().model;
  auto needs_model = [&](auto check) {
    return [&, check]() -> Outcome {
      if (!trained) return {false, "no trained model"};
      return check(*trained);
    };
  };

  run("ablation: mask removal", [&]() -> Outcome {
    if (!exp || with_mask.empty()) return {false, "LOUO experiment unavailable"};
    double on = 0.0, off = 0.0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      if (with_mask.size() < seed) with_mask.push_back(train_and_score(*exp, seed, false));
      const double a = with_mask[seed - 1].rmse;
      const double b = train_and_score(*exp, seed, true).rmse;
      on += a / 3.0;
      off += b / 3.0;
      per_seed += fmt(" [seed %d: %.4f / %.4f]", static_cast<int>(seed), a, b);
    }
    const double delta = (off - on) / on;
    return {delta >= -0.01, fmt("mean rmse with mask %.4f, without %.4f, delta %+.2f%%%s", on, off, 100.0 * delta,
                                per_seed.c_str())};
  });
  run("imbalance reproduction", needs_model(imbalance_sweep));
  run("streaming equals batch", needs_model(stream_matches_batch));

  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
