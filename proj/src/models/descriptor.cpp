#include "scene/models/descriptor.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

#include "scene/tensor.hpp"

namespace scene::nn {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv2d: return "conv2d";
    case LayerKind::MaxPool2d: return "maxpool2d";
    case LayerKind::Conv1d: return "conv1d";
    case LayerKind::MaxPool1d: return "maxpool1d";
    case LayerKind::Flatten: return "flatten";
    case LayerKind::Dense: return "dense";
    case LayerKind::Dropout: return "dropout";
    case LayerKind::Lstm: return "lstm";
    case LayerKind::Softmax: return "softmax";
  }
  throw std::logic_error("unreachable layer kind");
}

LayerKind layer_kind_from_string(const std::string& text) {
  for (LayerKind k : {LayerKind::Conv2d, LayerKind::MaxPool2d, LayerKind::Conv1d,
                      LayerKind::MaxPool1d, LayerKind::Flatten, LayerKind::Dense,
                      LayerKind::Dropout, LayerKind::Lstm, LayerKind::Softmax}) {
    if (to_string(k) == text) return k;
  }
  throw std::runtime_error("unknown layer kind: '" + text + "'");
}

std::vector<int> layer_output_shape(const LayerSpec& spec, const std::vector<int>& in) {
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("shape audit failed at " + to_string(spec.kind) + ": " + why +
                             " (input " + shape_to_string(in) + ")");
  };
  switch (spec.kind) {
    case LayerKind::Conv2d: {
      if (in.size() != 3) fail("expected [C,H,W] input");
      if (spec.padding == Padding::Same) {
        if (spec.stride != 1) fail("'same' padding requires stride 1");
        return {spec.filters, in[1], in[2]};
      }
      const int h = (in[1] - spec.kernel_h) / spec.stride + 1;
      const int w = (in[2] - spec.kernel_w) / spec.stride + 1;
      if (in[1] < spec.kernel_h || in[2] < spec.kernel_w) fail("kernel larger than input");
      return {spec.filters, h, w};
    }
    case LayerKind::MaxPool2d: {
      if (in.size() != 3) fail("expected [C,H,W] input");
      const int h = in[1] / spec.kernel;
      const int w = in[2] / spec.kernel;
      if (h == 0 || w == 0) fail("input smaller than pooling kernel");
      return {in[0], h, w};
    }
    case LayerKind::Conv1d: {
      if (in.size() != 2) fail("expected [T,C] input");
      if (spec.padding != Padding::Valid) fail("conv1d supports 'valid' padding only");
      if (in[0] < spec.kernel) fail("kernel larger than sequence");
      return {(in[0] - spec.kernel) / spec.stride + 1, spec.filters};
    }
    case LayerKind::MaxPool1d: {
      if (in.size() != 2) fail("expected [T,C] input");
      const int t = in[0] / spec.kernel;
      if (t == 0) fail("sequence shorter than pooling kernel");
      return {t, in[1]};
    }
    case LayerKind::Flatten: {
      int n = 1;
      for (int d : in) n *= d;
      return {n};
    }
    case LayerKind::Dense: {
      if (in.size() != 1) fail("expected flat input");
      return {spec.units};
    }
    case LayerKind::Dropout:
      return in;
    case LayerKind::Lstm: {
      if (in.size() != 2) fail("expected [T,in] input");
      if (spec.return_sequence) return {in[0], spec.units};
      return {spec.units};
    }
    case LayerKind::Softmax: {
      if (in.size() != 1) fail("expected flat input");
      return {spec.classes};
    }
  }
  throw std::logic_error("unreachable layer kind");
}

std::size_t layer_parameter_count(const LayerSpec& spec, const std::vector<int>& in) {
  switch (spec.kind) {
    case LayerKind::Conv2d:
      return static_cast<std::size_t>(spec.filters) *
                 (static_cast<std::size_t>(in[0]) * spec.kernel_h * spec.kernel_w) +
             spec.filters;
    case LayerKind::Conv1d:
      return static_cast<std::size_t>(spec.filters) *
                 (static_cast<std::size_t>(in[1]) * spec.kernel) +
             spec.filters;
    case LayerKind::Dense:
      return static_cast<std::size_t>(spec.units) * in[0] + spec.units;
    case LayerKind::Softmax:
      return static_cast<std::size_t>(spec.classes) * in[0] + spec.classes;
    case LayerKind::Lstm: {
      const std::size_t u = static_cast<std::size_t>(spec.units);
      const std::size_t in_dim = static_cast<std::size_t>(in[1]);
      std::size_t n = 4 * u * in_dim + 4 * u * u + 4 * u;
      if (spec.peepholes) n += 3 * u;
      return n;
    }
    default:
      return 0;
  }
}

}  // namespace scene::nn

namespace scene::models {

using nlohmann::json;

namespace {

json spec_to_json(const nn::LayerSpec& s) {
  json j;
  j["kind"] = nn::to_string(s.kind);
  switch (s.kind) {
    case nn::LayerKind::Conv2d:
      j["filters"] = s.filters;
      j["kernel"] = {s.kernel_h, s.kernel_w};
      j["stride"] = s.stride;
      j["padding"] = s.padding == nn::Padding::Same ? "same" : "valid";
      j["relu"] = s.relu;
      break;
    case nn::LayerKind::Conv1d:
      j["filters"] = s.filters;
      j["kernel"] = s.kernel;
      j["stride"] = s.stride;
      j["padding"] = s.padding == nn::Padding::Same ? "same" : "valid";
      j["relu"] = s.relu;
      break;
    case nn::LayerKind::MaxPool2d:
    case nn::LayerKind::MaxPool1d:
      j["kernel"] = s.kernel;
      break;
    case nn::LayerKind::Dense:
      j["units"] = s.units;
      j["relu"] = s.relu;
      j["dropout"] = s.dropout_rate;
      break;
    case nn::LayerKind::Dropout:
      j["rate"] = s.dropout_rate;
      break;
    case nn::LayerKind::Lstm:
      j["units"] = s.units;
      j["return_sequence"] = s.return_sequence;
      j["peepholes"] = s.peepholes;
      break;
    case nn::LayerKind::Softmax:
      j["classes"] = s.classes;
      break;
    case nn::LayerKind::Flatten:
      break;
  }
  return j;
}

nn::LayerSpec spec_from_json(const json& j) {
  nn::LayerSpec s;
  s.kind = nn::layer_kind_from_string(j.at("kind").get<std::string>());
  switch (s.kind) {
    case nn::LayerKind::Conv2d:
      s.filters = j.at("filters").get<int>();
      s.kernel_h = j.at("kernel").at(0).get<int>();
      s.kernel_w = j.at("kernel").at(1).get<int>();
      s.stride = j.at("stride").get<int>();
      s.padding = j.at("padding").get<std::string>() == "same" ? nn::Padding::Same
                                                               : nn::Padding::Valid;
      s.relu = j.at("relu").get<bool>();
      break;
    case nn::LayerKind::Conv1d:
      s.filters = j.at("filters").get<int>();
      s.kernel = j.at("kernel").get<int>();
      s.stride = j.at("stride").get<int>();
      s.padding = j.at("padding").get<std::string>() == "same" ? nn::Padding::Same
                                                               : nn::Padding::Valid;
      s.relu = j.at("relu").get<bool>();
      break;
    case nn::LayerKind::MaxPool2d:
    case nn::LayerKind::MaxPool1d:
      s.kernel = j.at("kernel").get<int>();
      break;
    case nn::LayerKind::Dense:
      s.units = j.at("units").get<int>();
      s.relu = j.at("relu").get<bool>();
      s.dropout_rate = j.at("dropout").get<double>();
      break;
    case nn::LayerKind::Dropout:
      s.dropout_rate = j.at("rate").get<double>();
      break;
    case nn::LayerKind::Lstm:
      s.units = j.at("units").get<int>();
      s.return_sequence = j.at("return_sequence").get<bool>();
      s.peepholes = j.at("peepholes").get<bool>();
      break;
    case nn::LayerKind::Softmax:
      s.classes = j.at("classes").get<int>();
      break;
    case nn::LayerKind::Flatten:
      break;
  }
  return s;
}

}  // namespace

json ArchitectureDescriptor::to_json() const {
  json j;
  j["name"] = name;
  j["input_shape"] = input_shape;
  j["num_classes"] = num_classes;
  j["layers"] = json::array();
  for (const auto& s : layers) j["layers"].push_back(spec_to_json(s));
  return j;
}

ArchitectureDescriptor ArchitectureDescriptor::from_json(const json& j) {
  ArchitectureDescriptor d;
  d.name = j.at("name").get<std::string>();
  d.input_shape = j.at("input_shape").get<std::vector<int>>();
  d.num_classes = j.at("num_classes").get<int>();
  for (const auto& js : j.at("layers")) d.layers.push_back(spec_from_json(js));
  return d;
}

std::vector<std::vector<int>> audit_shapes(const ArchitectureDescriptor& desc) {
  std::vector<std::vector<int>> shapes;
  shapes.reserve(desc.layers.size());
  std::vector<int> cur = desc.input_shape;
  for (const auto& spec : desc.layers) {
    cur = nn::layer_output_shape(spec, cur);
    shapes.push_back(cur);
  }
  if (desc.layers.empty() || desc.layers.back().kind != nn::LayerKind::Softmax) {
    throw std::runtime_error("descriptor must end in a softmax head");
  }
  if (cur != std::vector<int>{desc.num_classes}) {
    throw std::runtime_error("descriptor head width does not match num_classes");
  }
  return shapes;
}

std::size_t parameter_count(const ArchitectureDescriptor& desc) {
  std::size_t total = 0;
  std::vector<int> cur = desc.input_shape;
  for (const auto& spec : desc.layers) {
    total += nn::layer_parameter_count(spec, cur);
    cur = nn::layer_output_shape(spec, cur);
  }
  return total;
}

}  // namespace scene::models
