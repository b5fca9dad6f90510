#pragma once

#include <filesystem>

#include "scene/data/audio.hpp"

namespace scene::data {

/// Reads a RIFF/WAVE file holding 16-bit signed little-endian PCM with 1-4
/// channels. Samples are de-interleaved and scaled to [-1, 1] by 1/32768.
/// The label field is left for the caller to fill in.
AudioSegment read_wav(const std::filesystem::path& path);

/// Writes 16-bit PCM; samples are rounded and clamped to int16 range.
/// Round-trips exactly with read_wav for values on the int16 grid.
void write_wav(const std::filesystem::path& path, const AudioSegment& segment);

}  // namespace scene::data
