#pragma once

#include <array>
#include <cstdint>

#include "scene/data/labels.hpp"

namespace scene::eval {

/// 9x9 count matrix, rows = true class, columns = predicted class.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, data::kNumClasses>, data::kNumClasses> counts{};

  void add(data::ClassLabel truth, data::ClassLabel predicted) {
    ++counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)];
  }

  void add(int truth, int predicted) {
    ++counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)];
  }

  /// Elementwise sum; supports merging evaluation shards.
  void merge(const ConfusionMatrix& other) {
    for (int i = 0; i < data::kNumClasses; ++i) {
      for (int j = 0; j < data::kNumClasses; ++j) counts[i][j] += other.counts[i][j];
    }
  }

  std::int64_t row_sum(int i) const {
    std::int64_t s = 0;
    for (int j = 0; j < data::kNumClasses; ++j) s += counts[i][j];
    return s;
  }

  std::int64_t col_sum(int j) const {
    std::int64_t s = 0;
    for (int i = 0; i < data::kNumClasses; ++i) s += counts[i][j];
    return s;
  }

  std::int64_t total() const {
    std::int64_t s = 0;
    for (int i = 0; i < data::kNumClasses; ++i) s += row_sum(i);
    return s;
  }

  bool operator==(const ConfusionMatrix& other) const { return counts == other.counts; }
};

}  // namespace scene::eval
