#pragma once

#include <stdexcept>
#include <vector>

#include "scene/data/labels.hpp"

namespace scene::data {

/// Fixed-duration multi-channel PCM signal, samples normalized to [-1, 1].
struct AudioSegment {
  std::vector<std::vector<double>> channels;
  int sample_rate = 0;
  ClassLabel label = ClassLabel::Absence;

  double duration() const {
    if (channels.empty() || sample_rate <= 0) return 0.0;
    return static_cast<double>(channels[0].size()) / sample_rate;
  }

  void validate() const {
    if (channels.empty() || channels.size() > 4) {
      throw std::runtime_error("audio segment must have 1-4 channels");
    }
    for (const auto& ch : channels) {
      if (ch.size() != channels[0].size()) {
        throw std::runtime_error("audio segment channels differ in length");
      }
    }
    if (sample_rate <= 0) throw std::runtime_error("audio segment has no sample rate");
  }
};

}  // namespace scene::data
