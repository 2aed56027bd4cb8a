#include "insole/train.hpp"

#include "insole/loss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

namespace insole {

void TrainConfig::validate() const {
  if (!(lr >= 0.0)) throw ConfigError("train: lr must be >= 0");
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) throw ConfigError("train: val_fraction must lie in [0,1)");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("train: bad Adam betas");
  if (weight_decay < 0.0) throw ConfigError("train: weight_decay must be >= 0");
  if (!(bio_noise >= 0.0)) throw ConfigError("train: bio_noise must be >= 0");
}

ModelConfig apply_ablation(ModelConfig cfg, const AblationFlags& flags) {
  if (flags.no_mask) cfg.use_mask = false;
  if (flags.no_film) cfg.use_film = false;
  return cfg;
}

AugmentConfig apply_ablation(AugmentConfig cfg, const AblationFlags& flags) {
  if (flags.no_scale_aug) cfg.enable_scale = false;
  if (flags.no_shift_aug) cfg.enable_shift = false;
  return cfg;
}

double effective_lambda(const ModelConfig& cfg, const AblationFlags& flags) {
  return flags.no_smooth_loss ? 0.0 : cfg.lambda_smooth;
}

// ---- splits ----------------------------------------------------------------

SplitSpec SplitSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("split must look like louo:<user>, lomo:<motion> or random:<f>");
  const auto mode = text.substr(0, colon);
  const auto arg = text.substr(colon + 1);
  SplitSpec s;
  if (mode == "louo") {
    s.mode = SplitMode::leave_one_user_out;
    s.held_out = arg;
  } else if (mode == "lomo") {
    s.mode = SplitMode::leave_one_motion_out;
    s.held_out = arg;
  } else if (mode == "random") {
    s.mode = SplitMode::random;
    try {
      s.test_fraction = std::stod(arg);
    } catch (const std::exception&) {
      throw ConfigError("random split fraction is not a number: " + arg);
    }
  } else {
    throw ConfigError("unknown split mode: " + mode);
  }
  return s;
}

std::string SplitSpec::to_string() const {
  switch (mode) {
    case SplitMode::leave_one_user_out:
      return "louo:" + held_out;
    case SplitMode::leave_one_motion_out:
      return "lomo:" + held_out;
    case SplitMode::random:
      return "random:" + std::to_string(test_fraction);
  }
  return {};
}

namespace {

template <typename T>
std::set<int> random_test_recordings(const std::vector<T>& items, const SplitSpec& spec) {
  std::set<int> ids;
  for (const auto& it : items) ids.insert(it.recording_id);
  std::vector<int> order(ids.begin(), ids.end());
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_test = static_cast<std::size_t>(std::ceil(spec.test_fraction * static_cast<double>(order.size())));
  return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(n_test, order.size()))};
}

template <typename T>
Partition<T> partition(const std::vector<T>& items, const SplitSpec& spec) {
  Partition<T> out;
  if (spec.mode == SplitMode::random) {
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
      throw ConfigError("random split fraction must lie in (0,1)");
    }
    const auto test_ids = random_test_recordings(items, spec);
    for (const auto& it : items) (test_ids.count(it.recording_id) ? out.test : out.train).push_back(it);
    return out;
  }
  const bool by_user = spec.mode == SplitMode::leave_one_user_out;
  bool found = false;
  for (const auto& it : items) {
    const bool held = (by_user ? it.user_id : it.motion_label) == spec.held_out;
    found = found || held;
    (held ? out.test : out.train).push_back(it);
  }
  if (!found) {
    throw ConfigError(std::string("split: unknown ") + (by_user ? "user '" : "motion '") + spec.held_out + "'");
  }
  return out;
}

}  // namespace

Partition<TrainingWindow> split(const std::vector<TrainingWindow>& windows, const SplitSpec& spec) {
  auto p = partition(windows, spec);
  for (auto& w : p.train) w.provenance = Provenance::train;
  for (auto& w : p.test) w.provenance = Provenance::test;
  return p;
}

Partition<SyncedRecording> split(const std::vector<SyncedRecording>& recordings, const SplitSpec& spec) {
  return partition(recordings, spec);
}

// ---- optimizer -------------------------------------------------------------

template <typename S>
AdamW<S>::AdamW(const ModelConfig& cfg, const TrainConfig& train)
    : cfg_(train), m_(ModelParams<S>::zeros(cfg)), v_(ModelParams<S>::zeros(cfg)) {}

template <typename S>
void AdamW<S>::step(ModelParams<S>& params, const ModelParams<S>& grads) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  const S b1 = static_cast<S>(cfg_.beta1), b2 = static_cast<S>(cfg_.beta2);
  const S lr = static_cast<S>(cfg_.lr);
  const S step_scale = static_cast<S>(cfg_.lr / bc1);
  const S inv_bc2 = static_cast<S>(1.0 / bc2);
  const S eps = static_cast<S>(cfg_.eps);
  const S decay = static_cast<S>(cfg_.weight_decay);

  std::vector<const Mat<S>*> g;
  grads.visit([&](const std::string&, const Mat<S>& t, TensorKind) { g.push_back(&t); });
  std::vector<Mat<S>*> m, v;
  m_.visit([&](const std::string&, Mat<S>& t, TensorKind) { m.push_back(&t); });
  v_.visit([&](const std::string&, Mat<S>& t, TensorKind) { v.push_back(&t); });
  std::size_t i = 0;
  params.visit([&](const std::string&, Mat<S>& p, TensorKind kind) {
    auto& mi = *m[i];
    auto& vi = *v[i];
    const auto& gi = *g[i];
    ++i;
    mi = b1 * mi + (S(1) - b1) * gi;
    vi = b2 * vi + (S(1) - b2) * gi.cwiseAbs2();
    const Mat<S> update = step_scale * (mi.array() / ((vi.array() * inv_bc2).sqrt() + eps)).matrix();
    if (kind == TensorKind::weight && decay > S(0)) p -= (lr * decay) * p;
    p -= update;
  });
}

// ---- trainer ---------------------------------------------------------------

namespace {

template <typename S>
Mat<S> pack_bio(const std::vector<const TrainingWindow*>& batch) {
  Mat<S> bio(static_cast<Eigen::Index>(batch.size()), kBioDims);
  for (std::size_t b = 0; b < batch.size(); ++b) bio.row(static_cast<Eigen::Index>(b)) = batch[b]->bio_norm.transpose().cast<S>();
  return bio;
}

template <typename S>
void pack_batch(const std::vector<const TrainingWindow*>& batch, Mat<S>& x, Mat<S>& bio, Mat<S>& y) {
  std::vector<const MatXd*> xs, ys;
  xs.reserve(batch.size());
  ys.reserve(batch.size());
  for (const auto* w : batch) {
    xs.push_back(&w->x);
    ys.push_back(&w->y);
  }
  x = pack_tokens<S>(xs);
  y = pack_tokens<S>(ys);
  bio = pack_bio<S>(batch);
}

}  // namespace

template <typename S>
Trainer<S>::Trainer(const ModelConfig& model, const TrainConfig& train)
    : Trainer(ModelParams<S>::init(model, model.seed), model, train) {}

template <typename S>
Trainer<S>::Trainer(ModelParams<S> params, const ModelConfig& model, const TrainConfig& train)
    : model_(apply_ablation(model, train.ablation)),
      train_(train),
      lambda_(effective_lambda(model, train.ablation)),
      params_(std::move(params)),
      optimizer_(model_, train),
      dropout_rng_(train.seed ^ 0x9e3779b97f4a7c15ULL),
      bio_rng_(train.seed ^ 0xc2b2ae3d27d4eb4fULL) {
  model_.validate();
  train_.validate();
}

template <typename S>
double Trainer<S>::step(const std::vector<const TrainingWindow*>& batch) {
  for (const auto* w : batch) {
    if (w->provenance == Provenance::test) throw ConfigError("test-set window passed to the optimizer");
  }
  Mat<S> x, bio, y;
  pack_batch(batch, x, bio, y);
  if (train_.bio_noise > 0.0) {
    std::normal_distribution<double> n(0.0, train_.bio_noise);
    bio += Mat<S>::NullaryExpr(bio.rows(), bio.cols(), [&] { return static_cast<S>(n(bio_rng_)); });
  }
  auto lg = gradients(params_, model_, x, bio, y, lambda_, model_.dropout > 0.0 ? &dropout_rng_ : nullptr);
  optimizer_.step(params_, lg.grads);
  return static_cast<double>(lg.loss);
}

template <typename S>
double Trainer<S>::loss(const std::vector<TrainingWindow>& windows) const {
  if (windows.empty()) return std::numeric_limits<double>::quiet_NaN();
  constexpr std::size_t chunk = 256;
  double total = 0.0;
  for (std::size_t start = 0; start < windows.size(); start += chunk) {
    std::vector<const TrainingWindow*> batch;
    for (std::size_t i = start; i < std::min(windows.size(), start + chunk); ++i) batch.push_back(&windows[i]);
    Mat<S> x, bio, y;
    pack_batch(batch, x, bio, y);
    const Mat<S> pred = forward(params_, model_, x, bio);
    total += static_cast<double>(batch_loss<S>(pred, y, model_.window, lambda_, nullptr)) *
             static_cast<double>(batch.size());
  }
  return total / static_cast<double>(windows.size());
}

template class AdamW<float>;
template class AdamW<double>;
template class Trainer<float>;
template class Trainer<double>;

// ---- fit -------------------------------------------------------------------

ValidationSplit validation_split(const std::vector<TrainingWindow>& train, const TrainConfig& cfg) {
  // Whole recordings (or users) go to one side, never single windows.
  auto group_of = [&](const TrainingWindow& w) { return cfg.val_by_user ? w.user_id : std::to_string(w.recording_id); };
  std::set<std::string> groups;
  for (const auto& w : train) groups.insert(group_of(w));
  std::vector<std::string> order(groups.begin(), groups.end());
  std::mt19937_64 split_rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), split_rng);
  std::size_t n_val = 0;
  if (cfg.val_fraction > 0.0 && order.size() >= 2) {
    n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(cfg.val_fraction * order.size())));
  }
  const std::set<std::string> val_groups(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  ValidationSplit out;
  for (const auto& w : train) (val_groups.count(group_of(w)) ? out.val : out.fit).push_back(w);
  return out;
}

FitResult fit(const std::vector<TrainingWindow>& train, const TrainConfig& cfg, const ModelConfig& model,
              const AugmentConfig& augment, const EpochCallback& on_epoch) {
  cfg.validate();
  if (train.empty()) throw ConfigError("fit: empty training set");
  for (const auto& w : train) {
    if (w.provenance == Provenance::test) throw ConfigError("fit: test-set window in the training set");
  }

  auto [fit_set, val_set] = validation_split(train, cfg);

  const AugmentConfig aug = apply_ablation(augment, cfg.ablation);
  if (aug.copies > 0 && (aug.enable_scale || aug.enable_shift)) fit_set = augment_dataset(fit_set, aug);

  Trainer<float> trainer(model, cfg);
  FitResult result;
  result.model = trainer.model_config();
  result.params = trainer.params();
  double best = std::numeric_limits<double>::infinity();

  std::mt19937_64 shuffle_rng(cfg.seed + 1);
  std::vector<std::size_t> perm(fit_set.size());
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), shuffle_rng);
    double sum = 0.0;
    for (std::size_t start = 0; start < perm.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const auto end = std::min(perm.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<const TrainingWindow*> batch;
      batch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) batch.push_back(&fit_set[perm[i]]);
      double loss = 0.0;
      try {
        loss = trainer.step(batch);
      } catch (const NumericError& e) {
        throw TrainingError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
      }
      sum += loss * static_cast<double>(batch.size());
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = sum / static_cast<double>(fit_set.size());
    stats.val_loss = trainer.loss(val_set);
    if (!std::isfinite(stats.train_loss)) {
      throw TrainingError("training diverged at epoch " + std::to_string(epoch));
    }
    result.trace.push_back(stats);
    if (on_epoch) on_epoch(stats);
    const double criterion = val_set.empty() ? stats.train_loss : stats.val_loss;
    if (criterion < best) {
      best = criterion;
      result.best_epoch = epoch;
      result.params = trainer.params();
    }
  }
  result.steps = static_cast<std::int64_t>(cfg.epochs) *
                 static_cast<std::int64_t>((fit_set.size() + static_cast<std::size_t>(cfg.batch_size) - 1) /
                                           static_cast<std::size_t>(cfg.batch_size));
  return result;
}

void write_loss_trace_csv(const std::filesystem::path& path, const std::vector<EpochStats>& trace) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "epoch,train_loss,val_loss\n";
  char buf[96];
  for (const auto& s : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g\n", s.epoch, s.train_loss, s.val_loss);
    out << buf;
  }
}

}  // namespace insole
