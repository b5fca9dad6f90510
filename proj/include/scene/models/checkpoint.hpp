#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "scene/models/model.hpp"

namespace scene::models {

struct CheckpointMeta {
  int epoch = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  double val_macro_f1 = 0.0;
};

/// Serializes descriptor + named parameter tensors + training metadata in
/// the shared container format. Round-trips to bit-identical predictions.
void save_checkpoint(Model<float>& model, const CheckpointMeta& meta,
                     const std::filesystem::path& path);

struct LoadedCheckpoint {
  Model<float> model;
  CheckpointMeta meta;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace scene::models
