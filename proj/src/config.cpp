#include "insole/config.hpp"

#include <fstream>

namespace insole {

using nlohmann::json;

void ExperimentConfig::validate() const {
  model.validate();
  train.validate();
  augment.validate(model.window);
  if (data.train_stride < 1 || data.eval_stride < 1) throw ConfigError("data: strides must be >= 1");
}

json to_json(const ModelConfig& c) {
  return {{"n_channels", c.n_channels},   {"window", c.window},
          {"hidden", c.hidden},           {"mask_hidden", c.mask_hidden},
          {"n_layers", c.n_layers},       {"n_heads", c.n_heads},
          {"ffn_dim", c.ffn_dim},         {"bio_dim", c.bio_dim},
          {"film_hidden", c.film_hidden}, {"head_hidden", c.head_hidden},
          {"n_muscles", c.n_muscles},     {"dropout", c.dropout},
          {"lambda_smooth", c.lambda_smooth}, {"use_mask", c.use_mask},
          {"use_film", c.use_film},       {"fusion", c.fusion == MaskFusion::sum ? "sum" : "max"},
          {"seed", c.seed}};
}

ModelConfig model_config_from_json(const json& j) {
  ModelConfig c;
  c.n_channels = j.value("n_channels", c.n_channels);
  c.window = j.value("window", c.window);
  c.hidden = j.value("hidden", c.hidden);
  c.mask_hidden = j.value("mask_hidden", c.mask_hidden);
  c.n_layers = j.value("n_layers", c.n_layers);
  c.n_heads = j.value("n_heads", c.n_heads);
  c.ffn_dim = j.value("ffn_dim", c.ffn_dim);
  c.bio_dim = j.value("bio_dim", c.bio_dim);
  c.film_hidden = j.value("film_hidden", c.film_hidden);
  c.head_hidden = j.value("head_hidden", c.head_hidden);
  c.n_muscles = j.value("n_muscles", c.n_muscles);
  c.dropout = j.value("dropout", c.dropout);
  c.lambda_smooth = j.value("lambda_smooth", c.lambda_smooth);
  c.use_mask = j.value("use_mask", c.use_mask);
  c.use_film = j.value("use_film", c.use_film);
  const auto fusion = j.value("fusion", std::string("sum"));
  if (fusion == "sum") {
    c.fusion = MaskFusion::sum;
  } else if (fusion == "max") {
    c.fusion = MaskFusion::max;
  } else {
    throw ConfigError("model: unknown mask fusion '" + fusion + "'");
  }
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

namespace {

json augment_json(const AugmentConfig& a) {
  return {{"alpha_min", a.alpha_min},
          {"alpha_max", a.alpha_max},
          {"magnitude_threshold_kg", a.magnitude_threshold_kg},
          {"p_high", a.p_high},
          {"p_low", a.p_low},
          {"shift_prob", a.shift_prob},
          {"max_shift", a.max_shift},
          {"copies", a.copies},
          {"seed", a.seed},
          {"enable_scale", a.enable_scale},
          {"enable_shift", a.enable_shift},
          {"order", a.order == AugmentOrder::shift_then_scale ? "shift_then_scale" : "scale_then_shift"}};
}

AugmentConfig augment_from_json(const json& j) {
  AugmentConfig a;
  a.alpha_min = j.value("alpha_min", a.alpha_min);
  a.alpha_max = j.value("alpha_max", a.alpha_max);
  a.magnitude_threshold_kg = j.value("magnitude_threshold_kg", a.magnitude_threshold_kg);
  a.p_high = j.value("p_high", a.p_high);
  a.p_low = j.value("p_low", a.p_low);
  a.shift_prob = j.value("shift_prob", a.shift_prob);
  a.max_shift = j.value("max_shift", a.max_shift);
  a.copies = j.value("copies", a.copies);
  a.seed = j.value("seed", a.seed);
  a.enable_scale = j.value("enable_scale", a.enable_scale);
  a.enable_shift = j.value("enable_shift", a.enable_shift);
  const auto order = j.value("order", std::string("shift_then_scale"));
  if (order == "shift_then_scale") {
    a.order = AugmentOrder::shift_then_scale;
  } else if (order == "scale_then_shift") {
    a.order = AugmentOrder::scale_then_shift;
  } else {
    throw ConfigError("augment: unknown order '" + order + "'");
  }
  return a;
}

json train_json(const TrainConfig& t) {
  return {{"lr", t.lr},
          {"beta1", t.beta1},
          {"beta2", t.beta2},
          {"eps", t.eps},
          {"weight_decay", t.weight_decay},
          {"batch_size", t.batch_size},
          {"epochs", t.epochs},
          {"val_fraction", t.val_fraction},
          {"val_by_user", t.val_by_user},
          {"bio_noise", t.bio_noise},
          {"seed", t.seed},
          {"ablation",
           {{"no_mask", t.ablation.no_mask},
            {"no_film", t.ablation.no_film},
            {"no_scale_aug", t.ablation.no_scale_aug},
            {"no_shift_aug", t.ablation.no_shift_aug},
            {"no_smooth_loss", t.ablation.no_smooth_loss}}}};
}

TrainConfig train_from_json(const json& j) {
  TrainConfig t;
  t.lr = j.value("lr", t.lr);
  t.beta1 = j.value("beta1", t.beta1);
  t.beta2 = j.value("beta2", t.beta2);
  t.eps = j.value("eps", t.eps);
  t.weight_decay = j.value("weight_decay", t.weight_decay);
  t.batch_size = j.value("batch_size", t.batch_size);
  t.epochs = j.value("epochs", t.epochs);
  t.val_fraction = j.value("val_fraction", t.val_fraction);
  t.val_by_user = j.value("val_by_user", t.val_by_user);
  t.bio_noise = j.value("bio_noise", t.bio_noise);
  t.seed = j.value("seed", t.seed);
  if (j.contains("ablation")) {
    const auto& a = j.at("ablation");
    t.ablation.no_mask = a.value("no_mask", false);
    t.ablation.no_film = a.value("no_film", false);
    t.ablation.no_scale_aug = a.value("no_scale_aug", false);
    t.ablation.no_shift_aug = a.value("no_shift_aug", false);
    t.ablation.no_smooth_loss = a.value("no_smooth_loss", false);
  }
  return t;
}

json synth_json(const SynthConfig& s) {
  return {{"n_users", s.n_users},
          {"motions", s.motions},
          {"duration_s", s.duration_s},
          {"emg_rate_hz", s.emg_rate_hz},
          {"pressure_noise_kg", s.pressure_noise_kg},
          {"activation_noise", s.activation_noise},
          {"asymmetry_prob", s.asymmetry_prob},
          {"seed", s.seed},
          {"foot_separation", s.layout.foot_separation},
          {"kernel_sigma", s.layout.kernel_sigma}};
}

SynthConfig synth_from_json(const json& j) {
  SynthConfig s;
  s.n_users = j.value("n_users", s.n_users);
  s.motions = j.value("motions", s.motions);
  s.duration_s = j.value("duration_s", s.duration_s);
  s.emg_rate_hz = j.value("emg_rate_hz", s.emg_rate_hz);
  s.pressure_noise_kg = j.value("pressure_noise_kg", s.pressure_noise_kg);
  s.activation_noise = j.value("activation_noise", s.activation_noise);
  s.asymmetry_prob = j.value("asymmetry_prob", s.asymmetry_prob);
  s.seed = j.value("seed", s.seed);
  s.layout.foot_separation = j.value("foot_separation", s.layout.foot_separation);
  s.layout.kernel_sigma = j.value("kernel_sigma", s.layout.kernel_sigma);
  return s;
}

}  // namespace

json to_json(const ExperimentConfig& cfg) {
  const auto& b = cfg.data.bio_bounds;
  return {{"data",
           {{"train_stride", cfg.data.train_stride},
            {"eval_stride", cfg.data.eval_stride},
            {"bio_bounds",
             {{"weight", {b.weight_min, b.weight_max}},
              {"height", {b.height_min, b.height_max}},
              {"age", {b.age_min, b.age_max}},
              {"shoe", {b.shoe_min, b.shoe_max}}}}}},
          {"augment", augment_json(cfg.augment)},
          {"model", to_json(cfg.model)},
          {"train", train_json(cfg.train)},
          {"split", {{"spec", cfg.split.to_string()}, {"seed", cfg.split.seed}}},
          {"synth", synth_json(cfg.synth)}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("data")) {
      const auto& d = j.at("data");
      cfg.data.train_stride = d.value("train_stride", cfg.data.train_stride);
      cfg.data.eval_stride = d.value("eval_stride", cfg.data.eval_stride);
      if (d.contains("bio_bounds")) {
        const auto& bb = d.at("bio_bounds");
        auto& b = cfg.data.bio_bounds;
        auto pair = [&](const char* key, double& lo, double& hi) {
          if (bb.contains(key)) {
            lo = bb.at(key).at(0).get<double>();
            hi = bb.at(key).at(1).get<double>();
            if (!(hi > lo)) throw ConfigError(std::string("bio_bounds.") + key + " must be increasing");
          }
        };
        pair("weight", b.weight_min, b.weight_max);
        pair("height", b.height_min, b.height_max);
        pair("age", b.age_min, b.age_max);
        pair("shoe", b.shoe_min, b.shoe_max);
      }
    }
    if (j.contains("augment")) cfg.augment = augment_from_json(j.at("augment"));
    if (j.contains("model")) cfg.model = model_config_from_json(j.at("model"));
    if (j.contains("train")) cfg.train = train_from_json(j.at("train"));
    if (j.contains("split")) {
      const auto& s = j.at("split");
      if (s.contains("spec")) cfg.split = SplitSpec::parse(s.at("spec").get<std::string>());
      cfg.split.seed = s.value("seed", cfg.split.seed);
    }
    if (j.contains("synth")) cfg.synth = synth_from_json(j.at("synth"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

void write_experiment_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << to_json(cfg).dump(2) << '\n';
}

}  // namespace insole
