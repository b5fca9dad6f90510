#include "scene/models/checkpoint.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

#include "scene/container.hpp"

namespace scene::models {

void save_checkpoint(Model<float>& model, const CheckpointMeta& meta,
                     const std::filesystem::path& path) {
  Container c;
  c.meta["kind"] = "checkpoint";
  c.meta["descriptor"] = model.descriptor().to_json();
  c.meta["epoch"] = meta.epoch;
  c.meta["seed"] = meta.seed;
  c.meta["config_hash"] = meta.config_hash;
  c.meta["val_macro_f1"] = meta.val_macro_f1;
  for (const auto& p : model.params()) {
    c.tensors.emplace_back(p.name, *p.value);
  }
  write_container(path, c);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  Container c = read_container(path);
  ArchitectureDescriptor desc;
  CheckpointMeta meta;
  try {
    desc = ArchitectureDescriptor::from_json(c.meta.at("descriptor"));
    meta.epoch = c.meta.at("epoch").get<int>();
    meta.seed = c.meta.at("seed").get<std::uint64_t>();
    meta.config_hash = c.meta.at("config_hash").get<std::string>();
    meta.val_macro_f1 = c.meta.at("val_macro_f1").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt container (checkpoint metadata): " + path.string() +
                             ": " + e.what());
  }

  Rng rng(0);  // parameters are overwritten below
  Model<float> model = make_model<float>(desc, rng);
  for (const auto& p : model.params()) {
    const Tensor* stored = c.find(p.name);
    if (!stored) {
      throw std::runtime_error("checkpoint is missing tensor '" + p.name + "': " +
                               path.string());
    }
    if (stored->shape != p.value->shape) {
      throw std::runtime_error("checkpoint shape mismatch for '" + p.name + "': stored " +
                               shape_to_string(stored->shape) + ", model wants " +
                               shape_to_string(p.value->shape) + ": " + path.string());
    }
    p.value->data = stored->data;
  }
  return {std::move(model), meta};
}

}  // namespace scene::models
