#include "insole/checkpoint.hpp"
#include "insole/config.hpp"
#include "insole/eval.hpp"
#include "insole/stream.hpp"
#include "insole/synth.hpp"
#include "insole/train.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace insole;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

std::vector<SyncedRecording> load_normalized(const fs::path& manifest) {
  auto recs = load_dataset(load_manifest(manifest));
  for (auto& r : recs) r = normalize(r);
  return recs;
}

ExperimentConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return {};
  return load_experiment_config(path);
}

int cmd_gen(const std::string& config_path, const fs::path& out) {
  const auto cfg = load_config_or_default(config_path);
  cfg.synth.validate();
  const auto recs = gen_dataset(cfg.synth);
  write_dataset(out, recs, cfg.synth.layout);
  std::cerr << "wrote " << recs.size() << " recordings to " << out << '\n';
  return kOk;
}

int cmd_train(const std::string& config_path, const fs::path& manifest, const fs::path& out,
              const std::string& split_text, std::string trace_path) {
  auto cfg = load_config_or_default(config_path);
  if (!split_text.empty()) cfg.split = SplitSpec::parse(split_text);

  auto recs = load_normalized(manifest);
  // Without an explicit held-out id every recording is training data.
  std::vector<SyncedRecording> train_recs = std::move(recs);
  if (!cfg.split.held_out.empty() || cfg.split.mode == SplitMode::random) {
    train_recs = split(train_recs, cfg.split).train;
  }

  std::vector<TrainingWindow> windows;
  for (const auto& r : train_recs) {
    auto w = window(r, cfg.model.window, cfg.data.train_stride, cfg.data.bio_bounds);
    for (auto& x : w) x.provenance = Provenance::train;
    windows.insert(windows.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
  }
  if (windows.empty()) throw ConfigError("train: no full windows in the training recordings");

  const auto result = fit(windows, cfg.train, cfg.model, cfg.augment, [](const EpochStats& s) {
    std::fprintf(stderr, "epoch %3d  train %.6f  val %.6f\n", s.epoch, s.train_loss, s.val_loss);
  });
  save_checkpoint(out, result.params, result.model, cfg.train.seed);
  if (trace_path.empty()) trace_path = out.string() + ".loss.csv";
  write_loss_trace_csv(trace_path, result.trace);
  std::cerr << "best epoch " << result.best_epoch << ", checkpoint " << out << '\n';
  return kOk;
}

int cmd_eval(const std::string& ckpt, const fs::path& manifest, const std::string& split_text,
             const fs::path& report_path, const std::string& plots, const std::string& dump,
             const std::string& config_path) {
  const auto cfg = load_config_or_default(config_path);
  auto recs = load_normalized(manifest);
  auto part = split_text.empty() ? Partition<SyncedRecording>{{}, recs} : split(recs, SplitSpec::parse(split_text));
  if (part.test.empty()) throw ConfigError("eval: empty test set");

  std::optional<InferenceModel> model;
  RecordingPredictor predictor;
  int window_length = cfg.model.window;
  if (ckpt == "oracle") {
    predictor = oracle_predictor();
  } else if (ckpt == "mean") {
    if (part.train.empty()) throw ConfigError("eval: the mean predictor needs training recordings");
    predictor = constant_predictor(mean_activation(part.train));
  } else {
    auto loaded = load_checkpoint(ckpt);
    window_length = loaded.config.window;
    model.emplace(loaded.params, loaded.config);
    predictor = network_predictor(*model);
  }

  const auto report = evaluate(predictor, part.test, window_length);
  if (report_path.has_parent_path()) fs::create_directories(report_path.parent_path());
  std::ofstream(report_path) << report_to_json(report) << '\n';

  if (!plots.empty() || !dump.empty()) {
    if (!plots.empty()) fs::create_directories(plots);
    std::vector<std::int64_t> all_t;
    MatXd all_truth(kMuscles, 0), all_pred(kMuscles, 0);
    for (const auto& r : part.test) {
      const MatXd pred = predictor(r);
      if (pred.cols() == 0) continue;
      if (!plots.empty()) {
        const auto name = r.user_id + "_" + std::to_string(r.recording_id) + ".svg";
        write_trace_svg(fs::path(plots) / name, r.t_ms, r.activation, pred, r.user_id + " / " + r.motion_label);
      }
      if (!dump.empty()) {
        all_t.insert(all_t.end(), r.t_ms.begin(), r.t_ms.end());
        all_truth.conservativeResize(Eigen::NoChange, all_truth.cols() + r.frames());
        all_truth.rightCols(r.frames()) = r.activation;
        all_pred.conservativeResize(Eigen::NoChange, all_pred.cols() + r.frames());
        all_pred.rightCols(r.frames()) = pred;
      }
    }
    if (!dump.empty()) write_comparison_csv(dump, all_t, all_truth, all_pred);
  }
  std::printf("rmse_mean %.6f over %d recordings\n", report.overall.rmse_mean, report.n_recordings);
  return kOk;
}

int cmd_infer(const fs::path& ckpt, const fs::path& pressure, const fs::path& bio_path, const fs::path& out,
              bool realtime) {
  const auto loaded = load_checkpoint(ckpt);
  const InferenceModel model(loaded.params, loaded.config);
  StreamState stream(model, normalize_bio(load_bio_json(bio_path)));
  const auto frames = load_pressure_csv(pressure);

  std::vector<std::int64_t> t_ms;
  std::vector<ActivationVec> rows;
  auto next = std::chrono::steady_clock::now();
  for (const auto& frame : frames) {
    if (realtime) {
      std::this_thread::sleep_until(next);
      next += std::chrono::milliseconds(kFramePeriodMs);
    }
    if (auto y = stream.push(frame)) {
      t_ms.push_back(frame.t_ms);
      rows.push_back(*y);
    }
  }
  MatXd pred(kMuscles, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) pred.col(static_cast<Eigen::Index>(i)) = rows[i];
  write_prediction_csv(out, t_ms, pred);
  std::cerr << "emitted " << rows.size() << " of " << frames.size() << " frames\n";
  return kOk;
}

int cmd_imbalance(const fs::path& input, const fs::path& report_path) {
  std::vector<std::int64_t> t_ms;
  const MatXd pred = load_prediction_csv(input, &t_ms);
  if (pred.cols() == 0) throw FormatError(input.string() + ": no rows");
  nlohmann::json j;
  j["score"] = imbalance_score(pred);
  j["n_frames"] = pred.cols();
  const char* pairs[] = {"bicep", "back", "quad", "ham"};
  for (int p = 0; p < 4; ++p) {
    MatXd only = MatXd::Zero(kMuscles, pred.cols());
    only.middleRows(2 * p, 2) = pred.middleRows(2 * p, 2);
    // Four pairs are averaged, so a single active pair scores a quarter.
    j["pairs"][pairs[p]] = 4.0 * imbalance_score(only);
  }
  if (report_path.has_parent_path()) fs::create_directories(report_path.parent_path());
  std::ofstream(report_path) << j.dump(2) << '\n';
  std::printf("imbalance %.6f\n", j["score"].get<double>());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Insole pressure to muscle activation toolkit"};
  app.require_subcommand(1);

  std::string config, out, data, ckpt, split_text, report, plots, dump, pressure, bio, input, trace;
  bool realtime = false;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--config", config, "Experiment config JSON");
  gen->add_option("--out", out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("--config", config, "Experiment config JSON");
  train->add_option("--data", data, "Dataset manifest")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out, "Checkpoint path")->required();
  train->add_option("--split", split_text, "Hold out louo:<user>, lomo:<motion> or random:<fraction>");
  train->add_option("--trace", trace, "Loss trace CSV (default <out>.loss.csv)");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint, or the oracle/mean baselines");
  eval->add_option("--ckpt", ckpt, "Checkpoint path, 'oracle' or 'mean'")->required();
  eval->add_option("--data", data, "Dataset manifest")->required()->check(CLI::ExistingFile);
  eval->add_option("--split", split_text, "Test split; all recordings when omitted");
  eval->add_option("--report", report, "Report JSON")->required();
  eval->add_option("--plots", plots, "Directory for SVG traces");
  eval->add_option("--dump", dump, "Per-frame comparison CSV");
  eval->add_option("--config", config, "Experiment config JSON (window length for baselines)");

  auto* infer = app.add_subcommand("infer", "Streaming inference over a pressure CSV");
  infer->add_option("--ckpt", ckpt, "Checkpoint path")->required()->check(CLI::ExistingFile);
  infer->add_option("--pressure", pressure, "Pressure CSV")->required()->check(CLI::ExistingFile);
  infer->add_option("--bio", bio, "Bio profile JSON")->required()->check(CLI::ExistingFile);
  infer->add_option("--out", out, "Prediction CSV")->required();
  infer->add_flag("--realtime", realtime, "Pace frames at 20 Hz");

  auto* imb = app.add_subcommand("imbalance", "Left/right imbalance of a prediction file");
  imb->add_option("--input", input, "Prediction CSV")->required()->check(CLI::ExistingFile);
  imb->add_option("--report", report, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen(config, out);
    if (*train) return cmd_train(config, data, out, split_text, trace);
    if (*eval) return cmd_eval(ckpt, data, split_text, report, plots, dump, config);
    if (*infer) return cmd_infer(ckpt, pressure, bio, out, realtime);
    if (*imb) return cmd_imbalance(input, report);
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
