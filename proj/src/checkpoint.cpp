#include "insole/checkpoint.hpp"

#include "insole/config.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace insole {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return s;
}

void put_f32(std::string& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

float get_f32(const std::string& in, std::size_t offset) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return std::bit_cast<float>(bits);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams<float>& params, const ModelConfig& cfg,
                     std::uint64_t seed) {
  std::string payload;
  payload.reserve(static_cast<std::size_t>(params.size()) * 4);
  json tensors = json::array();
  params.visit([&](const std::string& name, const MatXf& t, TensorKind) {
    tensors.push_back({{"name", name}, {"shape", {t.rows(), t.cols()}}});
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      for (Eigen::Index j = 0; j < t.cols(); ++j) put_f32(payload, t(i, j));
  });
  const json header = {{"format", "insole-checkpoint"},
                       {"version", 1},
                       {"config", to_json(cfg)},
                       {"seed", seed},
                       {"param_count", params.size()},
                       {"tensors", tensors},
                       {"payload_bytes", payload.size()},
                       {"checksum", hex64(fnv1a(payload))}};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write checkpoint " + path.string());
  out << header.dump() << '\n';
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw FormatError("failed writing checkpoint " + path.string());
}

std::string read_checkpoint_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw CorruptionError("checkpoint has no header: " + path.string());
  return line;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw CorruptionError("checkpoint has no header: " + path.string());
  const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw CorruptionError("checkpoint header is not valid JSON: " + std::string(e.what()));
  }

  Checkpoint ck;
  try {
    if (header.at("format").get<std::string>() != "insole-checkpoint") throw CorruptionError("not a checkpoint file");
    ck.config = model_config_from_json(header.at("config"));
    ck.seed = header.at("seed").get<std::uint64_t>();
    if (header.at("payload_bytes").get<std::size_t>() != payload.size()) {
      throw CorruptionError("checkpoint payload size does not match header");
    }
    if (header.at("checksum").get<std::string>() != hex64(fnv1a(payload))) {
      throw CorruptionError("checkpoint checksum mismatch");
    }
    ck.params = ModelParams<float>::zeros(ck.config);
    const auto& tensors = header.at("tensors");
    std::size_t index = 0;
    std::size_t offset = 0;
    ck.params.visit([&](const std::string& name, MatXf& t, TensorKind) {
      if (index >= tensors.size()) throw CorruptionError("checkpoint is missing tensor " + name);
      const auto& entry = tensors[index++];
      const auto rows = entry.at("shape").at(0).get<Eigen::Index>();
      const auto cols = entry.at("shape").at(1).get<Eigen::Index>();
      if (entry.at("name").get<std::string>() != name || rows != t.rows() || cols != t.cols()) {
        throw CorruptionError("checkpoint tensor " + name + " does not match the configured shape");
      }
      if (offset + static_cast<std::size_t>(t.size()) * 4 > payload.size()) {
        throw CorruptionError("checkpoint payload truncated at " + name);
      }
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j, offset += 4) t(i, j) = get_f32(payload, offset);
    });
    if (index != tensors.size() || offset != payload.size()) {
      throw CorruptionError("checkpoint tensor list does not match payload");
    }
  } catch (const json::exception& e) {
    throw CorruptionError("checkpoint header malformed: " + std::string(e.what()));
  } catch (const ConfigError& e) {
    throw CorruptionError(std::string("checkpoint config invalid: ") + e.what());
  }
  return ck;
}

}  // namespace insole
