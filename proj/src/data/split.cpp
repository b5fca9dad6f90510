#include "scene/data/split.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#include "scene/rng.hpp"

namespace scene::data {

namespace {

constexpr double kFractions[3] = {0.75, 0.05, 0.20};

/// Largest-remainder apportionment of n into the three split fractions.
/// Ties go to the earlier part (train, then val, then test).
std::array<std::size_t, 3> apportion(std::size_t n) {
  std::array<std::size_t, 3> counts;
  std::array<double, 3> remainders;
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = kFractions[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(exact);
    remainders[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (std::size_t left = n - assigned, i = 0; left > 0; --left, ++i) {
    ++counts[order[i % 3]];
  }
  return counts;
}

}  // namespace

SplitResult split_dataset(const std::vector<ManifestEntry>& entries, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    by_class[static_cast<std::size_t>(entries[i].label)].push_back(i);
  }
  for (int c = 0; c < kNumClasses; ++c) {
    if (!by_class[c].empty() && by_class[c].size() < 20) {
      throw std::runtime_error("split requires at least 20 entries per class; class " +
                               std::string(class_names()[c]) + " has " +
                               std::to_string(by_class[c].size()));
    }
  }

  SplitResult result;
  for (int c = 0; c < kNumClasses; ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    Rng rng(Rng::mix(seed, 0x51a7u + static_cast<std::uint64_t>(c)));
    rng.shuffle(idx.begin(), idx.end());
    const auto counts = apportion(idx.size());
    std::size_t pos = 0;
    for (int part = 0; part < 3; ++part) {
      for (std::size_t k = 0; k < counts[part]; ++k, ++pos) {
        ManifestEntry e = entries[idx[pos]];
        e.split = part == 0 ? Split::Train : part == 1 ? Split::Val : Split::Test;
        (part == 0 ? result.train : part == 1 ? result.val : result.test)
            .push_back(std::move(e));
      }
    }
  }
  return result;
}

}  // namespace scene::data
