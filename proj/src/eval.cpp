#include "insole/eval.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace insole {

double rmse(const Eigen::Ref<const Eigen::VectorXd>& truth, const Eigen::Ref<const Eigen::VectorXd>& pred) {
  if (truth.size() != pred.size()) throw ConfigError("rmse: length mismatch");
  if (truth.size() == 0) throw ConfigError("rmse: empty series");
  return std::sqrt((truth - pred).squaredNorm() / static_cast<double>(truth.size()));
}

std::optional<double> pearson(const Eigen::Ref<const Eigen::VectorXd>& truth,
                              const Eigen::Ref<const Eigen::VectorXd>& pred) {
  if (truth.size() != pred.size()) throw ConfigError("pearson: length mismatch");
  if (truth.size() < 2) return std::nullopt;
  const Eigen::VectorXd a = truth.array() - truth.mean();
  const Eigen::VectorXd b = pred.array() - pred.mean();
  const double saa = a.squaredNorm();
  const double sbb = b.squaredNorm();
  constexpr double tiny = 1e-24;
  if (saa <= tiny || sbb <= tiny) return std::nullopt;
  return std::clamp(a.dot(b) / std::sqrt(saa * sbb), -1.0, 1.0);
}

double imbalance_score(const MatXd& act, double eps) {
  if (act.rows() != kMuscles) throw ConfigError("imbalance_score: expected 8 muscle rows");
  if (act.cols() < 1) throw ConfigError("imbalance_score: empty series");
  if ((act.array() < 0.0).any()) throw RangeError("imbalance_score: negative activation");
  double sum = 0.0;
  for (Eigen::Index t = 0; t < act.cols(); ++t) {
    for (int pair = 0; pair < kMuscles / 2; ++pair) {
      const double l = act(2 * pair, t);
      const double r = act(2 * pair + 1, t);
      const double total = l + r;
      if (total > eps) sum += std::abs(l - r) / total;
    }
  }
  return sum / (static_cast<double>(act.cols()) * (kMuscles / 2));
}

MuscleMetrics muscle_metrics(const MatXd& truth, const MatXd& pred) {
  if (truth.rows() != kMuscles || pred.rows() != kMuscles || truth.cols() != pred.cols()) {
    throw ConfigError("muscle_metrics: expected matching 8 x T matrices");
  }
  MuscleMetrics m;
  m.n_frames = static_cast<int>(truth.cols());
  double rmse_sum = 0.0, rho_sum = 0.0;
  int rho_count = 0;
  for (int i = 0; i < kMuscles; ++i) {
    const Eigen::VectorXd y = truth.row(i).transpose();
    const Eigen::VectorXd yhat = pred.row(i).transpose();
    m.rmse[static_cast<std::size_t>(i)] = rmse(y, yhat);
    rmse_sum += m.rmse[static_cast<std::size_t>(i)];
    m.pearson[static_cast<std::size_t>(i)] = pearson(y, yhat);
    if (m.pearson[static_cast<std::size_t>(i)]) {
      rho_sum += *m.pearson[static_cast<std::size_t>(i)];
      ++rho_count;
    }
  }
  m.rmse_mean = rmse_sum / kMuscles;
  if (rho_count > 0) m.pearson_mean = rho_sum / rho_count;
  return m;
}

// ---- inference -------------------------------------------------------------

InferenceModel::InferenceModel(const ModelParams<float>& params, const ModelConfig& cfg)
    : InferenceModel(params.cast<double>(), cfg) {}

InferenceModel::InferenceModel(ModelParams<double> params, const ModelConfig& cfg)
    : params_(std::move(params)), cfg_(cfg) {
  cfg_.validate();
}

MatXd InferenceModel::predict_tokens(const MatXd& tokens, const MatXd& bio) const {
  return forward(params_, cfg_, tokens, bio);
}

MatXd InferenceModel::predict_window(const MatXd& x, const BioVec& bio) const {
  return forward_window<double>(params_, cfg_, x, bio);
}

MatXd InferenceModel::predict_recording(const SyncedRecording& rec, const BioBounds& bounds) const {
  if (rec.units != Units::normalized) throw ConfigError("predict_recording expects a normalized recording");
  const int w = cfg_.window;
  const int n = rec.frames();
  if (n < w) return {};
  const BioVec bio = normalize_bio(rec.bio, bounds);
  MatXd out(cfg_.n_muscles, n);
  const int n_windows = n - w + 1;
  constexpr int chunk = 128;
  for (int s0 = 0; s0 < n_windows; s0 += chunk) {
    const int count = std::min(chunk, n_windows - s0);
    MatXd tokens(static_cast<Eigen::Index>(count) * w, cfg_.n_channels);
    for (int b = 0; b < count; ++b) {
      tokens.middleRows(static_cast<Eigen::Index>(b) * w, w) = rec.pressure.middleCols(s0 + b, w).transpose();
    }
    const MatXd bios = bio.transpose().replicate(count, 1);
    const MatXd pred = forward(params_, cfg_, tokens, bios);
    for (int b = 0; b < count; ++b) {
      const int start = s0 + b;
      if (start == 0) {
        out.leftCols(w) = pred.middleRows(0, w).transpose();
      } else {
        out.col(start + w - 1) = pred.row(static_cast<Eigen::Index>(b) * w + w - 1).transpose();
      }
    }
  }
  return out;
}

RecordingPredictor network_predictor(const InferenceModel& model) {
  return [&model](const SyncedRecording& rec) { return model.predict_recording(rec); };
}

RecordingPredictor oracle_predictor() {
  return [](const SyncedRecording& rec) { return rec.activation; };
}

RecordingPredictor constant_predictor(const ActivationVec& value) {
  return [value](const SyncedRecording& rec) { return MatXd(value.replicate(1, rec.frames())); };
}

ActivationVec mean_activation(const std::vector<SyncedRecording>& recordings) {
  ActivationVec sum = ActivationVec::Zero();
  double n = 0.0;
  for (const auto& r : recordings) {
    if (r.units != Units::normalized) throw ConfigError("mean_activation expects normalized recordings");
    sum += r.activation.rowwise().sum();
    n += static_cast<double>(r.frames());
  }
  if (n == 0.0) throw ConfigError("mean_activation: no frames");
  return sum / n;
}

EvalReport evaluate(const RecordingPredictor& predictor, const std::vector<SyncedRecording>& test, int window) {
  if (test.empty()) throw ConfigError("evaluate: empty test set");
  struct Series {
    std::vector<MatXd> truth, pred;
  };
  Series all;
  std::map<std::string, Series> by_motion, by_user;
  EvalReport report;
  for (const auto& rec : test) {
    if (rec.units != Units::normalized) throw ConfigError("evaluate expects normalized recordings");
    MatXd pred = predictor(rec);
    if (pred.size() == 0) continue;
    if (pred.rows() != kMuscles || pred.cols() != rec.frames()) {
      throw ConfigError("evaluate: predictor returned the wrong shape");
    }
    report.n_windows += std::max(0, rec.frames() - window + 1);
    ++report.n_recordings;
    for (Series* s : {&all, &by_motion[rec.motion_label], &by_user[rec.user_id]}) {
      s->truth.push_back(rec.activation);
      s->pred.push_back(pred);
    }
  }
  if (report.n_recordings == 0) throw ConfigError("evaluate: no recording long enough for one window");
  auto concat = [](const std::vector<MatXd>& parts) {
    Eigen::Index n = 0;
    for (const auto& p : parts) n += p.cols();
    MatXd out(kMuscles, n);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
      out.middleCols(at, p.cols()) = p;
      at += p.cols();
    }
    return out;
  };
  auto metrics = [&](const Series& s) { return muscle_metrics(concat(s.truth), concat(s.pred)); };
  report.overall = metrics(all);
  for (const auto& [k, s] : by_motion) report.per_motion[k] = metrics(s);
  for (const auto& [k, s] : by_user) report.per_user[k] = metrics(s);
  return report;
}

namespace {

nlohmann::json metrics_json(const MuscleMetrics& m) {
  nlohmann::json rmse = nlohmann::json::object(), rho = nlohmann::json::object();
  for (int i = 0; i < kMuscles; ++i) {
    rmse[kMuscleNames[static_cast<std::size_t>(i)]] = m.rmse[static_cast<std::size_t>(i)];
    const auto& p = m.pearson[static_cast<std::size_t>(i)];
    rho[kMuscleNames[static_cast<std::size_t>(i)]] = p ? nlohmann::json(*p) : nlohmann::json(nullptr);
  }
  return {{"rmse_per_muscle", rmse},
          {"rmse_mean", m.rmse_mean},
          {"pearson_per_muscle", rho},
          {"pearson_mean", m.pearson_mean ? nlohmann::json(*m.pearson_mean) : nlohmann::json(nullptr)},
          {"n_frames", m.n_frames}};
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j = metrics_json(report.overall);
  j["n_windows"] = report.n_windows;
  j["n_recordings"] = report.n_recordings;
  j["per_motion"] = nlohmann::json::object();
  for (const auto& [k, m] : report.per_motion) j["per_motion"][k] = metrics_json(m);
  j["per_user"] = nlohmann::json::object();
  for (const auto& [k, m] : report.per_user) j["per_user"][k] = metrics_json(m);
  return j.dump(2);
}

void write_trace_svg(const std::filesystem::path& path, const std::vector<std::int64_t>& t_ms, const MatXd& truth,
                     const MatXd& pred, const std::string& title) {
  if (t_ms.empty() || truth.cols() != static_cast<Eigen::Index>(t_ms.size()) || pred.cols() != truth.cols()) {
    throw ConfigError("write_trace_svg: series lengths differ");
  }
  constexpr int width = 900, panel = 90, margin = 40, left = 90;
  const int height = margin + kMuscles * panel + 20;
  const double t0 = static_cast<double>(t_ms.front());
  const double span = std::max(1.0, static_cast<double>(t_ms.back()) - t0);
  const double plot_w = width - left - 20;

  std::string svg;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" font-family=\"sans-serif\" "
                "font-size=\"11\">\n<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n",
                width, height);
  svg += buf;
  svg += "<text x=\"" + std::to_string(left) + "\" y=\"20\" font-size=\"14\">" + title + "</text>\n";
  auto polyline = [&](const MatXd& m, int row, double y0, const char* colour) {
    svg += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"";
    svg += colour;
    svg += "\" points=\"";
    for (std::size_t j = 0; j < t_ms.size(); ++j) {
      const double x = left + plot_w * (static_cast<double>(t_ms[j]) - t0) / span;
      const double v = std::clamp(m(row, static_cast<Eigen::Index>(j)), 0.0, 1.0);
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", x, y0 + (panel - 15) * (1.0 - v));
      svg += buf;
    }
    svg += "\"/>\n";
  };
  for (int m = 0; m < kMuscles; ++m) {
    const double y0 = margin + m * panel;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%d\" y=\"%.1f\" width=\"%.1f\" height=\"%d\" fill=\"none\" stroke=\"#ccc\"/>\n"
                  "<text x=\"8\" y=\"%.1f\">%s</text>\n",
                  left, y0, plot_w, panel - 15, y0 + panel / 2.0, kMuscleNames[static_cast<std::size_t>(m)]);
    svg += buf;
    polyline(truth, m, y0, "#1f77b4");
    polyline(pred, m, y0, "#d62728");
  }
  svg += "</svg>\n";
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << svg;
}

}  // namespace insole
