#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scene/data/labels.hpp"
#include "scene/dsp/dsp.hpp"
#include "scene/tensor.hpp"

namespace scene::data {

/// One row of a feature index: the extracted features of one channel of
/// one audio segment.
struct FeatureEntry {
  std::string feature_file;  // relative to the index file's directory
  std::string source;        // originating audio path (segment identity)
  ClassLabel label = ClassLabel::Absence;
  std::string session;
  int channel = 0;
};

/// Feature pair loaded back from disk, float32 working precision.
struct LoadedFeatures {
  Tensor image;  // [1 x S x S], ready as cnn2d input
  Tensor mfcc;   // [T x M]
};

void write_feature_file(const std::filesystem::path& path, const dsp::FeaturePair& features,
                        const FeatureEntry& entry, const dsp::DspConfig& cfg);

LoadedFeatures read_feature_file(const std::filesystem::path& path);

void save_feature_index(const std::vector<FeatureEntry>& entries,
                        const std::filesystem::path& path);

std::vector<FeatureEntry> load_feature_index(const std::filesystem::path& path);

}  // namespace scene::data
