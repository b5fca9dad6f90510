#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scene/tensor.hpp"

namespace scene {

/// On-disk tensor container shared by checkpoints and feature files.
/// Layout: magic "SENS" | u16 version | u32 header length | JSON header |
/// raw little-endian float32 tensor data, row-major. The header carries
/// free-form metadata plus a tensor directory (name/shape/offset, offsets
/// in bytes from the start of the data section).
struct Container {
  nlohmann::json meta;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor* find(const std::string& name) const {
    for (const auto& [n, t] : tensors) {
      if (n == name) return &t;
    }
    return nullptr;
  }
};

inline constexpr std::uint16_t kContainerVersion = 1;

void write_container(const std::filesystem::path& path, const Container& container);

/// Throws: "corrupt container ..." for structural damage, "unsupported
/// container version ..." for a version bump.
Container read_container(const std::filesystem::path& path);

}  // namespace scene
