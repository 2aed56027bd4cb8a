#pragma once

#include "insole/model.hpp"

#include <filesystem>

namespace insole {

struct Checkpoint {
  ModelConfig config;
  ModelParams<float> params;
  std::uint64_t seed = 0;
};

// File layout: one line of JSON (config, seed, tensor names and shapes,
// payload size, FNV-1a checksum), a newline, then every tensor as row-major
// 32-bit little-endian floats in header order.
void save_checkpoint(const std::filesystem::path& path, const ModelParams<float>& params, const ModelConfig& cfg,
                     std::uint64_t seed);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Header JSON of a checkpoint file, parsed without reading the payload.
std::string read_checkpoint_header(const std::filesystem::path& path);

}  // namespace insole
