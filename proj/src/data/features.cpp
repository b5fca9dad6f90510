#include "scene/data/features.hpp"

#include <fstream>
#include <stdexcept>

#include "scene/container.hpp"

namespace scene::data {

namespace {
constexpr const char* kIndexHeader = "feature_file\tsource\tlabel\tsession\tchannel";
}

void write_feature_file(const std::filesystem::path& path, const dsp::FeaturePair& features,
                        const FeatureEntry& entry, const dsp::DspConfig& cfg) {
  Container c;
  c.meta["kind"] = "features";
  c.meta["source"] = entry.source;
  c.meta["label"] = std::string(to_string(entry.label));
  c.meta["session"] = entry.session;
  c.meta["channel"] = entry.channel;
  c.meta["dsp"] = {{"frame_length", cfg.frame_length}, {"hop_length", cfg.hop_length},
                   {"image_size", cfg.image_size},     {"n_mels", cfg.n_mels},
                   {"mfcc_count", cfg.mfcc_count},     {"sample_rate", cfg.sample_rate}};
  c.tensors.emplace_back("image", features.image.cast<float>());
  c.tensors.emplace_back("mfcc", features.mfcc.cast<float>());
  write_container(path, c);
}

LoadedFeatures read_feature_file(const std::filesystem::path& path) {
  const Container c = read_container(path);
  const Tensor* image = c.find("image");
  const Tensor* mfcc = c.find("mfcc");
  if (!image || !mfcc) {
    throw std::runtime_error("feature file missing image/mfcc tensors: " + path.string());
  }
  LoadedFeatures out;
  out.image = Tensor({1, image->dim(0), image->dim(1)}, image->data);
  out.mfcc = *mfcc;
  return out;
}

void save_feature_index(const std::vector<FeatureEntry>& entries,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write feature index: " + path.string());
  out << kIndexHeader << "\n";
  for (const auto& e : entries) {
    out << e.feature_file << "\t" << e.source << "\t" << to_string(e.label) << "\t"
        << e.session << "\t" << e.channel << "\n";
  }
}

std::vector<FeatureEntry> load_feature_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("feature index not found: " + path.string());
  std::vector<FeatureEntry> entries;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row == 1 && line == kIndexHeader) continue;

    std::string fields[5];
    int n_fields = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        if (n_fields < 5) fields[n_fields] = line.substr(start, i - start);
        ++n_fields;
        start = i + 1;
      }
    }
    if (n_fields != 5) {
      throw std::runtime_error("feature index row " + std::to_string(row) +
                               " is malformed: '" + line + "'");
    }
    FeatureEntry e;
    e.feature_file = fields[0];
    e.source = fields[1];
    e.label = label_from_string(fields[2]);
    e.session = fields[3];
    e.channel = std::stoi(fields[4]);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace scene::data
