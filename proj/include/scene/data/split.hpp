#pragma once

#include <cstdint>
#include <vector>

#include "scene/data/manifest.hpp"

namespace scene::data {

struct SplitResult {
  std::vector<ManifestEntry> train;
  std::vector<ManifestEntry> val;
  std::vector<ManifestEntry> test;
};

/// Stratified 75/5/20 split with largest-remainder rounding per class.
/// Deterministic for a fixed seed; the three parts partition the input.
/// Requires at least 20 entries per class present in the input.
SplitResult split_dataset(const std::vector<ManifestEntry>& entries, std::uint64_t seed);

}  // namespace scene::data
