#include "insole/data.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace insole {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

std::string_view trim_cr(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t row, std::string_view column) {
  T value{};
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw FormatError("row " + std::to_string(row) + ", column " + std::string(column) +
                      ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

std::vector<std::string> pressure_header() {
  std::vector<std::string> cols{"t_ms"};
  char buf[8];
  for (char side : {'L', 'R'}) {
    for (int i = 0; i < kChannelsPerFoot; ++i) {
      std::snprintf(buf, sizeof buf, "%c%02d", side, i);
      cols.emplace_back(buf);
    }
  }
  return cols;
}

std::vector<std::string> numbered_header(const char* prefix, int n) {
  std::vector<std::string> cols;
  for (int i = 0; i < n; ++i) cols.push_back(prefix + std::to_string(i));
  return cols;
}

void check_header(std::string_view line, const std::vector<std::string>& expected, const fs::path& path) {
  const auto fields = split_fields(trim_cr(line));
  bool ok = fields.size() == expected.size();
  for (std::size_t i = 0; ok && i < fields.size(); ++i) ok = fields[i] == expected[i];
  if (!ok) throw FormatError(path.string() + ": malformed header");
}

void append_fixed(std::string& out, double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
  out.append(buf, static_cast<std::size_t>(n));
}

// Reads rows of `t_ms` + `width` numeric columns after validating the header.
template <typename RowFn>
void read_table(const fs::path& path, const std::vector<std::string>& header, RowFn&& on_row) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  check_header(line, header, path);
  std::size_t row = 0;
  std::int64_t last_t = 0;
  while (std::getline(in, line)) {
    const auto view = trim_cr(line);
    if (view.empty()) continue;
    ++row;
    const auto fields = split_fields(view);
    if (fields.size() != header.size()) {
      throw FormatError(path.string() + ": row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    }
    const auto t = parse_number<std::int64_t>(fields[0], row, header[0]);
    if (row > 1 && t <= last_t) {
      throw SequencingError(path.string() + ": t_ms not strictly increasing at row " + std::to_string(row));
    }
    last_t = t;
    on_row(row, t, fields);
  }
}

}  // namespace

PressureVec PressureFrame::stacked() const {
  PressureVec v;
  v << left, right;
  return v;
}

BioVec normalize_bio(const BioProfile& bio, const BioBounds& b) {
  auto unit = [](double v, double lo, double hi) {
    if (!std::isfinite(v)) throw RangeError("bio profile value is not finite");
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  };
  if (bio.gender_code != 0 && bio.gender_code != 1) throw RangeError("gender_code must be 0 or 1");
  BioVec out;
  out << unit(bio.weight_kg, b.weight_min, b.weight_max), unit(bio.height_cm, b.height_min, b.height_max),
      unit(bio.age_years, b.age_min, b.age_max), unit(bio.shoe_size_eu, b.shoe_min, b.shoe_max),
      static_cast<double>(bio.gender_code);
  return out;
}

PressureVec normalize_pressure_frame(const PressureVec& kg) {
  PressureVec out;
  for (int c = 0; c < kChannels; ++c) {
    const double v = kg(c);
    if (!(v >= 0.0 && v <= kMaxPressureKg)) {
      throw RangeError("pressure channel " + std::to_string(c) + " value " + std::to_string(v) +
                       " kg outside [0,20]");
    }
    out(c) = normalize_pressure(v);
  }
  return out;
}

SyncedRecording normalize(const SyncedRecording& rec) {
  if (rec.units == Units::normalized) return rec;
  SyncedRecording out = rec;
  for (Eigen::Index j = 0; j < rec.pressure.cols(); ++j) {
    out.pressure.col(j) = normalize_pressure_frame(rec.pressure.col(j));
  }
  for (Eigen::Index j = 0; j < rec.activation.cols(); ++j) {
    for (int m = 0; m < kMuscles; ++m) {
      const double v = rec.activation(m, j);
      if (!(v >= 0.0 && v <= kMaxEmgUv)) {
        throw RangeError("activation " + std::string(kMuscleNames[m]) + " value " + std::to_string(v) +
                         " µV outside [0,1000] at frame " + std::to_string(j));
      }
      out.activation(m, j) = normalize_activation(v);
    }
  }
  out.units = Units::normalized;
  return out;
}

SyncedRecording denormalize(const SyncedRecording& rec) {
  if (rec.units == Units::physical) return rec;
  SyncedRecording out = rec;
  out.pressure = rec.pressure.unaryExpr([](double v) { return denormalize_pressure(v); });
  out.activation = rec.activation.unaryExpr([](double v) { return denormalize_activation(v); });
  out.units = Units::physical;
  return out;
}

SyncedRecording synchronize(const std::vector<PressureFrame>& pressure, const std::vector<EmgSample>& emg) {
  if (pressure.empty() || emg.empty()) throw AlignmentError("synchronize: empty input stream");
  const std::int64_t lo = std::max(pressure.front().t_ms, emg.front().t_ms);
  const std::int64_t hi = std::min(pressure.back().t_ms, emg.back().t_ms);
  if (lo > hi) throw AlignmentError("synchronize: pressure and sEMG time ranges do not overlap");

  const std::int64_t half = kFramePeriodMs / 2;
  SyncedRecording rec;
  std::vector<PressureVec> kept_p;
  std::vector<ActivationVec> kept_a;
  auto cursor = emg.begin();
  for (const auto& frame : pressure) {
    if (frame.t_ms < lo || frame.t_ms > hi) continue;
    const std::int64_t from = frame.t_ms - half;
    const std::int64_t to = frame.t_ms + half;
    cursor = std::lower_bound(cursor, emg.end(), from,
                              [](const EmgSample& s, std::int64_t t) { return s.t_ms < t; });
    ActivationVec sum = ActivationVec::Zero();
    int count = 0;
    for (auto it = cursor; it != emg.end() && it->t_ms < to; ++it) {
      sum += it->channels;
      ++count;
    }
    if (count == 0) continue;
    rec.t_ms.push_back(frame.t_ms);
    kept_p.push_back(frame.stacked());
    kept_a.push_back(sum / count);
  }
  if (rec.t_ms.empty()) throw AlignmentError("synchronize: no pressure frame has sEMG coverage");

  const auto n = static_cast<Eigen::Index>(rec.t_ms.size());
  rec.pressure.resize(kChannels, n);
  rec.activation.resize(kMuscles, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    rec.pressure.col(j) = kept_p[static_cast<std::size_t>(j)];
    rec.activation.col(j) = kept_a[static_cast<std::size_t>(j)];
  }
  return rec;
}

std::vector<TrainingWindow> window(const SyncedRecording& rec, int length, int stride, const BioBounds& bounds) {
  if (length < 2) throw ConfigError("window length must be >= 2");
  if (stride < 1) throw ConfigError("window stride must be >= 1");
  if (rec.units != Units::normalized) throw ConfigError("window() expects a normalized recording");
  std::vector<TrainingWindow> out;
  const int n = rec.frames();
  if (n < length) return out;
  const BioVec bio = normalize_bio(rec.bio, bounds);
  out.reserve(static_cast<std::size_t>((n - length) / stride + 1));
  for (int start = 0; start + length <= n; start += stride) {
    TrainingWindow w;
    w.x = rec.pressure.middleCols(start, length);
    w.y = rec.activation.middleCols(start, length);
    w.bio_norm = bio;
    w.user_id = rec.user_id;
    w.motion_label = rec.motion_label;
    w.recording_id = rec.recording_id;
    w.start = start;
    out.push_back(std::move(w));
  }
  return out;
}

// ---- files -----------------------------------------------------------------

std::vector<PressureFrame> load_pressure_csv(const fs::path& path) {
  const auto header = pressure_header();
  std::vector<PressureFrame> frames;
  read_table(path, header, [&](std::size_t row, std::int64_t t, const std::vector<std::string_view>& f) {
    PressureFrame frame;
    frame.t_ms = t;
    for (int c = 0; c < kChannels; ++c) {
      const auto& col = header[static_cast<std::size_t>(c + 1)];
      const double v = parse_number<double>(f[static_cast<std::size_t>(c + 1)], row, col);
      if (!(v >= 0.0 && v <= kMaxPressureKg)) {
        throw RangeError(path.string() + ": row " + std::to_string(row) + ", column " + col + ": value " +
                         std::string(f[static_cast<std::size_t>(c + 1)]) + " kg outside [0,20]");
      }
      if (c < kChannelsPerFoot) {
        frame.left(c) = v;
      } else {
        frame.right(c - kChannelsPerFoot) = v;
      }
    }
    frames.push_back(frame);
  });
  return frames;
}

void write_pressure_csv(const fs::path& path, const std::vector<PressureFrame>& frames) {
  auto out = open_output(path);
  const auto header = pressure_header();
  std::string buf;
  for (std::size_t i = 0; i < header.size(); ++i) buf += (i ? "," : "") + header[i];
  buf += '\n';
  for (const auto& f : frames) {
    buf += std::to_string(f.t_ms);
    for (int c = 0; c < kChannelsPerFoot; ++c) {
      buf += ',';
      append_fixed(buf, f.left(c));
    }
    for (int c = 0; c < kChannelsPerFoot; ++c) {
      buf += ',';
      append_fixed(buf, f.right(c));
    }
    buf += '\n';
  }
  out << buf;
}

std::vector<EmgSample> load_emg_csv(const fs::path& path) {
  auto header = numbered_header("m", kMuscles);
  header.insert(header.begin(), "t_ms");
  std::vector<EmgSample> samples;
  read_table(path, header, [&](std::size_t row, std::int64_t t, const std::vector<std::string_view>& f) {
    EmgSample s;
    s.t_ms = t;
    for (int m = 0; m < kMuscles; ++m) {
      const auto& col = header[static_cast<std::size_t>(m + 1)];
      const double v = parse_number<double>(f[static_cast<std::size_t>(m + 1)], row, col);
      if (!(v >= 0.0 && v <= kMaxEmgUv)) {
        throw RangeError(path.string() + ": row " + std::to_string(row) + ", column " + col + ": value " +
                         std::string(f[static_cast<std::size_t>(m + 1)]) + " µV outside [0,1000]");
      }
      s.channels(m) = v;
    }
    samples.push_back(s);
  });
  return samples;
}

void write_emg_csv(const fs::path& path, const std::vector<EmgSample>& samples) {
  auto out = open_output(path);
  std::string buf = "t_ms";
  for (int m = 0; m < kMuscles; ++m) buf += ",m" + std::to_string(m);
  buf += '\n';
  for (const auto& s : samples) {
    buf += std::to_string(s.t_ms);
    for (int m = 0; m < kMuscles; ++m) {
      buf += ',';
      append_fixed(buf, s.channels(m));
    }
    buf += '\n';
  }
  out << buf;
}

BioProfile load_bio_json(const fs::path& path) {
  auto in = open_input(path);
  try {
    const json j = json::parse(in);
    BioProfile bio;
    bio.weight_kg = j.at("weight_kg").get<double>();
    bio.height_cm = j.at("height_cm").get<double>();
    bio.age_years = j.at("age_years").get<double>();
    bio.shoe_size_eu = j.at("shoe_size_eu").get<double>();
    bio.gender_code = j.at("gender_code").get<int>();
    if (bio.gender_code != 0 && bio.gender_code != 1) throw RangeError("gender_code must be 0 or 1");
    return bio;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_bio_json(const fs::path& path, const BioProfile& bio) {
  auto out = open_output(path);
  const json j = {{"weight_kg", bio.weight_kg},
                  {"height_cm", bio.height_cm},
                  {"age_years", bio.age_years},
                  {"shoe_size_eu", bio.shoe_size_eu},
                  {"gender_code", bio.gender_code}};
  out << j.dump(2) << '\n';
}

Manifest load_manifest(const fs::path& path) {
  auto in = open_input(path);
  Manifest manifest;
  manifest.base_dir = path.parent_path();
  try {
    const json j = json::parse(in);
    for (const auto& r : j.at("recordings")) {
      ManifestEntry e;
      e.pressure_csv = r.at("pressure_csv").get<std::string>();
      e.emg_csv = r.at("emg_csv").get<std::string>();
      e.bio_json = r.at("bio_json").get<std::string>();
      e.user_id = r.at("user_id").get<std::string>();
      e.motion_label = r.at("motion_label").get<std::string>();
      manifest.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return manifest;
}

void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
  json list = json::array();
  for (const auto& e : entries) {
    list.push_back({{"pressure_csv", e.pressure_csv},
                    {"emg_csv", e.emg_csv},
                    {"bio_json", e.bio_json},
                    {"user_id", e.user_id},
                    {"motion_label", e.motion_label}});
  }
  auto out = open_output(path);
  out << json{{"recordings", list}}.dump(2) << '\n';
}

std::vector<SyncedRecording> load_dataset(const Manifest& manifest) {
  std::vector<SyncedRecording> recs;
  recs.reserve(manifest.entries.size());
  int id = 0;
  for (const auto& e : manifest.entries) {
    auto resolve = [&](const std::string& p) {
      const fs::path q(p);
      return q.is_absolute() ? q : manifest.base_dir / q;
    };
    auto rec = synchronize(load_pressure_csv(resolve(e.pressure_csv)), load_emg_csv(resolve(e.emg_csv)));
    rec.bio = load_bio_json(resolve(e.bio_json));
    rec.user_id = e.user_id;
    rec.motion_label = e.motion_label;
    rec.recording_id = id++;
    recs.push_back(std::move(rec));
  }
  return recs;
}

void write_prediction_csv(const fs::path& path, const std::vector<std::int64_t>& t_ms, const MatXd& predictions) {
  if (predictions.rows() != kMuscles || predictions.cols() != static_cast<Eigen::Index>(t_ms.size())) {
    throw ConfigError("prediction matrix shape does not match timestamps");
  }
  auto out = open_output(path);
  std::string buf = "t_ms";
  for (int m = 0; m < kMuscles; ++m) buf += ",pred" + std::to_string(m);
  buf += '\n';
  for (std::size_t j = 0; j < t_ms.size(); ++j) {
    buf += std::to_string(t_ms[j]);
    for (int m = 0; m < kMuscles; ++m) {
      buf += ',';
      append_fixed(buf, predictions(m, static_cast<Eigen::Index>(j)));
    }
    buf += '\n';
  }
  out << buf;
}

MatXd load_prediction_csv(const fs::path& path, std::vector<std::int64_t>* t_ms) {
  auto header = numbered_header("pred", kMuscles);
  header.insert(header.begin(), "t_ms");
  std::vector<ActivationVec> cols;
  std::vector<std::int64_t> times;
  read_table(path, header, [&](std::size_t row, std::int64_t t, const std::vector<std::string_view>& f) {
    ActivationVec v;
    for (int m = 0; m < kMuscles; ++m) {
      v(m) = parse_number<double>(f[static_cast<std::size_t>(m + 1)], row, header[static_cast<std::size_t>(m + 1)]);
    }
    cols.push_back(v);
    times.push_back(t);
  });
  MatXd out(kMuscles, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
  if (t_ms) *t_ms = std::move(times);
  return out;
}

void write_comparison_csv(const fs::path& path, const std::vector<std::int64_t>& t_ms, const MatXd& truth,
                          const MatXd& predictions) {
  auto out = open_output(path);
  std::string buf = "t_ms";
  for (int m = 0; m < kMuscles; ++m) buf += ",gt" + std::to_string(m);
  for (int m = 0; m < kMuscles; ++m) buf += ",pred" + std::to_string(m);
  buf += '\n';
  for (std::size_t j = 0; j < t_ms.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    buf += std::to_string(t_ms[j]);
    for (int m = 0; m < kMuscles; ++m) {
      buf += ',';
      append_fixed(buf, truth(m, c));
    }
    for (int m = 0; m < kMuscles; ++m) {
      buf += ',';
      append_fixed(buf, predictions(m, c));
    }
    buf += '\n';
  }
  out << buf;
}

}  // namespace insole
