#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "scene/nn/layer_spec.hpp"

namespace scene::models {

/// Ordered layer list plus input shape; the single source of truth for a
/// model's structure. Serialized into every checkpoint so a model can be
/// rebuilt from its file alone.
struct ArchitectureDescriptor {
  std::string name;
  std::vector<int> input_shape;
  std::vector<nn::LayerSpec> layers;
  int num_classes = 9;

  nlohmann::json to_json() const;
  static ArchitectureDescriptor from_json(const nlohmann::json& j);
};

/// Propagates shapes through the descriptor. Returns one output shape per
/// layer; throws when consecutive layers do not chain.
std::vector<std::vector<int>> audit_shapes(const ArchitectureDescriptor& desc);

/// Total trainable parameter count implied by the descriptor.
std::size_t parameter_count(const ArchitectureDescriptor& desc);

}  // namespace scene::models
